#include "icps/process.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace icps {

const Device* ProcessGraph::find_device(const std::string& n) const {
  for (const auto& d : devices)
    if (d.name == n) return &d;
  return nullptr;
}

const ComponentInstance* ProcessGraph::find_component(const std::string& n) const {
  for (const auto& c : components)
    if (c.name == n) return &c;
  return nullptr;
}

const SensingPoint* ProcessGraph::find_sensor(const std::string& n) const {
  for (const auto& s : sensors)
    if (s.name == n) return &s;
  return nullptr;
}

const ComponentInstance* ProcessGraph::attached_component(const std::string& sensor) const {
  for (const auto& c : connections)
    if (c.to == sensor) return find_component(c.from);
  return nullptr;
}

bool ProcessGraph::device_alive(const std::string& n) const {
  const auto* d = find_device(n);
  return d && d->alive;
}

ProcessDecl ProcessGraph::to_decl() const {
  ProcessDecl d;
  d.domain = domain_name;
  for (const auto& dev : devices)
    if (dev.alive) d.devices.push_back(dev);
  d.components = components;
  d.sensors = sensors;
  d.connections = connections;
  return d;
}

ProcessGraph build_process(const ProcessDecl& decl, const IndustrialDomain& domain) {
  std::vector<Diagnostic> diags;
  auto err = [&](std::string code, std::string msg, SourcePos pos) {
    diags.push_back(make_error(std::move(code), std::move(msg), pos));
  };

  ProcessGraph g;
  g.domain_name = decl.domain;

  std::set<std::string> device_names;
  for (const auto& d : decl.devices) {
    if (!device_names.insert(d.name).second)
      err("duplicate-name", "device '" + d.name + "' declared more than once", d.pos);
    g.devices.push_back(Device{d.name, true, d.pos});
  }
  auto check_device = [&](const std::optional<std::string>& dev, const std::string& owner,
                          SourcePos pos) {
    if (dev && !device_names.count(*dev))
      err("unknown-device", "'" + owner + "' is bound to undeclared device '" + *dev + "'", pos);
  };

  std::set<std::string> node_names;
  for (const auto& c : decl.components) {
    if (!node_names.insert(c.name).second)
      err("duplicate-name", "'" + c.name + "' declared more than once", c.pos);
    const auto* cls = domain.find_class(c.class_name);
    if (!cls) {
      err("unknown-class", "'" + c.name + "' uses undeclared class '" + c.class_name + "'", c.pos);
    } else if (cls->kind != c.kind) {
      err("class-kind",
          "'" + c.name + "' is declared " +
              (c.kind == ClassKind::Actuator ? "an actuator" : "physical") + " but class '" +
              cls->name + "' is " + (cls->kind == ClassKind::Actuator ? "an actuator" : "physical"),
          c.pos);
    }
    if (c.kind == ClassKind::Actuator && !c.device)
      err("missing-device", "actuator '" + c.name + "' must be bound to a device with '@'", c.pos);
    check_device(c.device, c.name, c.pos);
    g.components.push_back(c);
  }

  for (const auto& s : decl.sensors) {
    if (!node_names.insert(s.name).second)
      err("duplicate-name", "'" + s.name + "' declared more than once", s.pos);
    const auto* p = domain.find_property(s.property);
    if (!p || p->is_enum())
      err("unknown-property", "sensing point '" + s.name + "' measures undeclared property '" +
                                  s.property + "'",
          s.pos);
    if (!s.device)
      err("missing-device", "sensing point '" + s.name + "' must be bound to a device with '@'",
          s.pos);
    check_device(s.device, s.name, s.pos);
    g.sensors.push_back(s);
  }

  auto is_component = [&](const std::string& n) {
    return std::any_of(decl.components.begin(), decl.components.end(),
                       [&](const auto& c) { return c.name == n; });
  };
  auto is_sensor = [&](const std::string& n) {
    return std::any_of(decl.sensors.begin(), decl.sensors.end(),
                       [&](const auto& s) { return s.name == n; });
  };

  std::map<std::string, int> sensor_links;
  for (const auto& c : decl.connections) {
    bool ok = true;
    for (const auto* end : {&c.from, &c.to})
      if (!is_component(*end) && !is_sensor(*end)) {
        err("unknown-node", "connection " + c.from + "->" + c.to + " uses undeclared node '" +
                                *end + "'",
            c.pos);
        ok = false;
      }
    if (ok && c.from == c.to) {
      err("self-connection", "'" + c.from + "' is connected to itself", c.pos);
      ok = false;
    }
    if (ok && is_sensor(c.from)) {
      err("sensor-source",
          "connection " + c.from + "->" + c.to + " must run from a component to the sensing point",
          c.pos);
      ok = false;
    }
    if (ok && is_sensor(c.to)) ++sensor_links[c.to];
    g.connections.push_back(c);
  }

  for (const auto& s : decl.sensors) {
    int n = sensor_links[s.name];
    if (n != 1) {
      err("sensor-attachment",
          "sensing point '" + s.name + "' must be attached to exactly one component (found " +
              std::to_string(n) + ")",
          s.pos);
      continue;
    }
    const auto* comp = g.attached_component(s.name);
    const auto* cls = comp ? domain.find_class(comp->class_name) : nullptr;
    if (cls && !cls->has_attribute(s.property))
      err("unmeasurable", "sensing point '" + s.name + "' measures '" + s.property +
                              "' but component '" + comp->name + "' has no such attribute",
          s.pos);
  }

  if (!diags.empty()) throw Error(std::move(diags));
  return g;
}

ProcessGraph remove_device(const ProcessGraph& p, const std::string& device,
                           const std::optional<std::string>& controlled_actuator) {
  if (!p.find_device(device)) fail("unknown-device", "no device named '" + device + "'");
  if (controlled_actuator) {
    const auto* a = p.find_component(*controlled_actuator);
    if (a && a->device == device)
      fail("actuator-device", "device '" + device + "' hosts the controlled actuator '" +
                                  *controlled_actuator + "'; the control loop cannot be restored");
  }
  ProcessGraph g = p;
  for (auto& d : g.devices)
    if (d.name == device) d.alive = false;
  std::set<std::string> dropped;
  std::vector<SensingPoint> kept;
  for (const auto& s : g.sensors) {
    if (s.device == device) dropped.insert(s.name);
    else kept.push_back(s);
  }
  g.sensors = std::move(kept);
  std::erase_if(g.connections, [&](const Connection& c) {
    return dropped.count(c.from) || dropped.count(c.to);
  });
  return g;
}

}  // namespace icps
