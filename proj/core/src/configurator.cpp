#include "icps/configurator.hpp"

#include <map>
#include <set>

namespace icps {

const Assignment* ControlLoopConfig::assignment_of(const std::string& participant) const {
  for (const auto& a : assignments)
    if (a.participant.name() == participant) return &a;
  return nullptr;
}

namespace {

std::set<std::string> choice_enums(const LocalProtocol& p) {
  std::set<std::string> out;
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      break;
    case LocalProtocol::Kind::Prefix:
      out = choice_enums(p.cont());
      break;
    case LocalProtocol::Kind::Choice:
      out.insert(p.enum_type().name());
      for (const auto& b : p.branches()) out.merge(choice_enums(b.cont));
      break;
    case LocalProtocol::Kind::Rec:
      out = choice_enums(p.body());
      break;
  }
  return out;
}

class Builder {
 public:
  Builder(const Repository& r, const ProcessGraph& p, ControlLoopConfig& out)
      : repo_(r), proc_(p), out_(out) {}

  void add(const AgentTemplate& t, const std::string& participant, const std::string& node,
           const std::vector<std::string>& producers, const std::vector<std::string>& consumers) {
    if (t.producers() != producers.size())
      fail("arity-mismatch", "template '" + t.name + "' expects " + std::to_string(t.producers()) +
                                 " input(s) but '" + node + "' has " +
                                 std::to_string(producers.size()));
    if (t.consumers() != consumers.size())
      fail("arity-mismatch", "template '" + t.name + "' expects " + std::to_string(t.consumers()) +
                                 " output(s) but '" + node + "' has " +
                                 std::to_string(consumers.size()));
    std::map<std::string, std::string> mapping;
    for (std::size_t i = 0; i < producers.size(); ++i)
      mapping["producer" + std::to_string(i + 1)] = producers[i];
    for (std::size_t i = 0; i < consumers.size(); ++i)
      mapping["consumer" + std::to_string(i + 1)] = consumers[i];
    Participant who(participant);
    out_.configuration.bind(who, rename_participants(t.protocol, mapping));
    out_.assignments.push_back(Assignment{who, t.name, node});
  }

  // Instantiates the subtree below state `n`; returns the participant that
  // delivers the state to `consumer`.
  std::string build(const TreeNode& n, const std::string& consumer) {
    if (n.node.kind != SegKind::State || n.children.size() != 1)
      fail("bad-tree", "malformed estimation tree at '" + n.node.id() + "'");
    const auto& provider = n.children.front();
    const auto name = provider.node.id();
    if (provider.node.kind == SegKind::Sensing) {
      const auto* s = proc_.find_sensor(name);
      if (!s) fail("dead-device", "sensing point '" + name + "' is no longer in the process");
      if (!s->device || !proc_.device_alive(*s->device))
        fail("dead-device", "sensing point '" + name + "' sits on a failed device");
      const auto& t = lookup_template(repo_, TemplateKind::Sense, provider.node.attribute);
      add(t, name, name, {}, {consumer});
      return name;
    }
    const auto& t = lookup_template(repo_, TemplateKind::Estimate, provider.node.attribute);
    std::vector<std::string> inputs;
    for (const auto& c : provider.children) inputs.push_back(build(c, name));
    add(t, name, name, inputs, {consumer});
    return name;
  }

 private:
  const Repository& repo_;
  const ProcessGraph& proc_;
  ControlLoopConfig& out_;
};

}  // namespace

ControlLoopConfig instantiate(const EstimationTree& tree, const Repository& r,
                              const std::string& controller_template,
                              const std::string& actuator, const ProcessGraph& p) {
  const auto* act = p.find_component(actuator);
  if (!act || act->kind != ClassKind::Actuator)
    fail("unknown-actuator", "'" + actuator + "' is not an actuator of the process");
  if (!act->device || !p.device_alive(*act->device))
    fail("dead-device", "actuator '" + actuator + "' sits on a failed device");

  const auto* ctl = r.find_by_name(controller_template);
  if (!ctl) fail("template-not-found", "repository '" + r.name + "' has no template '" +
                                           controller_template + "'");
  if (ctl->kind != TemplateKind::Control)
    fail("template-kind", "'" + controller_template + "' is not a control template");
  if (ctl->subject != act->class_name)
    fail("template-subject", "controller '" + controller_template + "' controls '" +
                                 ctl->subject + "', not '" + act->class_name + "'");
  const auto& drv = lookup_template(r, TemplateKind::Actuate, act->class_name);
  if (choice_enums(ctl->protocol) != choice_enums(drv.protocol))
    fail("signal-mismatch", "controller '" + ctl->name + "' and actuator template '" + drv.name +
                                "' choose over different enumerations");

  ControlLoopConfig out;
  out.tree = tree;
  out.controller = controller_template;
  out.actuator = actuator;

  Builder b(r, p, out);
  auto root = b.build(tree.root, controller_template);
  b.add(*ctl, controller_template, controller_template, {root}, {actuator});
  b.add(drv, actuator, actuator, {controller_template}, {});
  return out;
}

ControlLoopConfig configure(const EstimationTree& tree, const Repository& r,
                            const std::string& controller_template, const std::string& actuator,
                            const ProcessGraph& p) {
  auto out = instantiate(tree, r, controller_template, actuator, p);
  auto res = compose(out.configuration);
  if (!res.ok()) throw Error(res.error().to_diagnostic());
  out.certified = res.value().global;
  out.compose_steps = res.value().steps;
  return out;
}

}  // namespace icps
