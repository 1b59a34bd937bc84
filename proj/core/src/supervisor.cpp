#include "icps/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "icps/interpreter.hpp"

namespace icps {

PlantState plant_step(const PlantState& s, const PlantParams& p, double demand, double dt) {
  PlantState n = s;
  n.inflow = s.pump_on ? p.pump_rate : 0.0;
  n.outflow = demand;
  n.tank_level = std::clamp(s.tank_level + dt * (n.inflow - n.outflow) / p.area, 0.0, p.capacity);
  n.time = s.time + 1;
  return n;
}

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::On:
      return "ON";
    case Decision::Off:
      return "OFF";
    case Decision::Hold:
      return "Hold";
  }
  return "?";
}

Decision control_decision(double level_estimate, double low, double high) {
  if (level_estimate < low) return Decision::On;
  if (level_estimate > high) return Decision::Off;
  return Decision::Hold;
}

// ---------------------------------------------------------------------------
// Plant readings

namespace {

bool connected(const ProcessGraph& p, const std::string& from, const std::string& to) {
  for (const auto& c : p.connections)
    if (c.from == from && c.to == to) return true;
  return false;
}

const ComponentInstance& actuator_of(const ProcessGraph& p) {
  for (const auto& c : p.components)
    if (c.kind == ClassKind::Actuator) return c;
  fail("unknown-actuator", "the process has no actuator");
}

const ComponentInstance& tank_of(const ProcessGraph& p) {
  for (const auto& c : p.components)
    if (c.class_name == "tank") return c;
  fail("unknown-node", "the process has no tank");
}

// True value of `component.property` in the tank/pump plant: the pump lifts
// water from a zero-head reservoir to the junction, which draws nothing and
// feeds the inlet pipe; the outlet pipe carries the consumer demand.
double truth(const ComponentInstance& c, const std::string& property, const PlantState& s,
             const EstimationContext& ctx) {
  const auto& p = *ctx.process;
  const auto& pump = actuator_of(p);
  const auto& tank = tank_of(p);
  const double q = s.inflow;
  if (property == "head") {
    if (c.name == tank.name) return s.tank_level;
    if (connected(p, c.name, pump.name)) return 0.0;
    if (connected(p, pump.name, c.name)) return q / ctx.lenergy_coefficient;
    return s.tank_level;
  }
  if (property == "flow") {
    if (c.name == pump.name || connected(p, c.name, pump.name)) return q;
    if (connected(p, pump.name, c.name)) return 0.0;
    if (connected(p, c.name, tank.name)) return q;
    return s.outflow;
  }
  fail("unmeasurable", "the plant has no value for '" + c.name + "." + property + "'");
}

}  // namespace

double read_sensor(const std::string& sensor, const PlantState& s, const EstimationContext& ctx) {
  const auto* sp = ctx.process->find_sensor(sensor);
  if (!sp) fail("sensor-unavailable", "sensing point '" + sensor + "' is not in the process");
  if (sp->device && ctx.failed_devices.count(*sp->device))
    fail("sensor-unavailable", "sensing point '" + sensor + "' is on failed device '" + *sp->device + "'");
  const auto* c = ctx.process->attached_component(sensor);
  if (!c) fail("sensor-unavailable", "sensing point '" + sensor + "' is detached");
  return truth(*c, sp->property, s, ctx);
}

namespace {

// +1 when `x` feeds component `c`, -1 when `c` feeds `x` or `x` is c's own
// draw.
double sign(const ProcessGraph& p, const std::string& x, const std::string& c) {
  if (x == c) return -1.0;
  if (connected(p, x, c)) return 1.0;
  if (connected(p, c, x)) return -1.0;
  fail("estimator-input", "'" + x + "' is not adjacent to '" + c + "'");
}

}  // namespace

double apply_estimator(const SegNode& est, const SegNode& output, const std::vector<SegNode>& inputs,
                       const std::vector<double>& values, const EstimationContext& ctx,
                       double last_known) {
  const auto& p = *ctx.process;
  const auto& c = est.owner;
  if (inputs.size() != values.size())
    fail("estimator-input", "estimator '" + est.id() + "' got " + std::to_string(values.size()) +
                                " value(s) for " + std::to_string(inputs.size()) + " input(s)");
  if (est.attribute == "link_energy") {
    double up = 0.0, down = 0.0;
    bool has_up = false, has_down = false;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (connected(p, inputs[i].owner, c)) up = values[i], has_up = true;
      else if (connected(p, c, inputs[i].owner)) down = values[i], has_down = true;
    }
    if (!has_up || !has_down)
      fail("estimator-input", "'" + est.id() + "' needs the heads on both of its ends");
    return ctx.lenergy_coefficient * (down - up);
  }
  double balance = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) balance += sign(p, inputs[i].owner, c) * values[i];
  if (output.attribute == "head")
    return std::clamp(last_known + ctx.dt * balance / ctx.plant.area, 0.0, ctx.plant.capacity);
  return -balance / sign(p, output.owner, c);
}

namespace {

double eval_state(const TreeNode& n, const PlantState& s, const EstimationContext& ctx,
                  double last_known) {
  const auto& provider = n.children.at(0);
  if (provider.node.kind == SegKind::Sensing) return read_sensor(provider.node.owner, s, ctx);
  std::vector<SegNode> in;
  std::vector<double> vals;
  for (const auto& ch : provider.children) {
    in.push_back(ch.node);
    vals.push_back(eval_state(ch, s, ctx, last_known));
  }
  return apply_estimator(provider.node, n.node, in, vals, ctx, last_known);
}

}  // namespace

double estimate_level(const EstimationTree& tree, const PlantState& s, const EstimationContext& ctx,
                      double last_known) {
  return eval_state(tree.root, s, ctx, last_known);
}

// ---------------------------------------------------------------------------
// Scenarios

double Scenario::demand_at(std::size_t step) const {
  if (demand.empty()) return 0.0;
  return demand[std::min(step, demand.size() - 1)];
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::vector<Diagnostic> diags;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string t; ls >> t;) w.push_back(t);
    if (w.empty()) continue;
    SourcePos pos{lineno, 1};
    auto bad = [&](const std::string& msg) { diags.push_back(make_error("scenario", msg, pos)); };
    auto number = [&](const std::string& s, double& out) {
      try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return true;
      } catch (const std::exception&) {
        bad("'" + s + "' is not a number");
        return false;
      }
    };
    auto count = [&](const std::string& s, std::size_t& out) {
      double d = 0;
      if (!number(s, d)) return;
      if (d < 0 || std::floor(d) != d) return bad("'" + s + "' is not a count");
      out = static_cast<std::size_t>(d);
    };
    const auto& k = w[0];
    if (k == "fail") {
      if (w.size() != 4 || w[2] != "at") {
        bad("expected 'fail <device> at <step>'");
        continue;
      }
      Failure f{w[1], 0};
      count(w[3], f.step);
      sc.failures.push_back(f);
      continue;
    }
    if (k == "demand") {
      if (w.size() < 2) {
        bad("'demand' needs at least one value");
        continue;
      }
      sc.demand.clear();
      for (std::size_t i = 1; i < w.size(); ++i) {
        double d = 0;
        if (number(w[i], d)) sc.demand.push_back(d);
      }
      continue;
    }
    if (w.size() != 2) {
      bad("expected '" + k + " <value>'");
      continue;
    }
    const auto& v = w[1];
    if (k == "script") sc.script = v;
    else if (k == "process") sc.process = v;
    else if (k == "repository") sc.repository = v;
    else if (k == "controller") sc.controller = v;
    else if (k == "actuator") sc.actuator = v;
    else if (k == "root") sc.root = v;
    else if (k == "dt") number(v, sc.dt);
    else if (k == "steps") count(v, sc.steps);
    else if (k == "area") number(v, sc.plant.area);
    else if (k == "capacity") number(v, sc.plant.capacity);
    else if (k == "pump_rate") number(v, sc.plant.pump_rate);
    else if (k == "low") number(v, sc.low);
    else if (k == "high") number(v, sc.high);
    else if (k == "level") number(v, sc.level);
    else if (k == "lenergy_coefficient") number(v, sc.lenergy_coefficient);
    else if (k == "tree") count(v, sc.tree);
    else if (k == "state_budget") count(v, sc.state_budget);
    else bad("unknown key '" + k + "'");
  }
  if (sc.dt <= 0) diags.push_back(make_error("scenario", "dt must be positive"));
  if (sc.low >= sc.high) diags.push_back(make_error("scenario", "low must be below high"));
  if (sc.plant.area <= 0) diags.push_back(make_error("scenario", "area must be positive"));
  if (sc.lenergy_coefficient == 0)
    diags.push_back(make_error("scenario", "lenergy_coefficient must be nonzero"));
  if (sc.tree == 0) diags.push_back(make_error("scenario", "tree indices start at 1"));
  if (!diags.empty()) throw Error(diags);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail("io", "cannot read '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Scenario sc = parse_scenario(ss.str());
  if (!sc.script.empty() && sc.script.is_relative()) sc.script = file.parent_path() / sc.script;
  return sc;
}

// ---------------------------------------------------------------------------
// Events

std::string_view event_kind_name(Event::Kind k) {
  switch (k) {
    case Event::Kind::Start:
      return "start";
    case Event::Kind::Failure:
      return "failure";
    case Event::Kind::Reconfiguration:
      return "reconfiguration";
    case Event::Kind::Control:
      return "control";
    case Event::Kind::Fatal:
      return "fatal";
  }
  return "?";
}

std::string to_string(const Event& e) {
  return "step " + std::to_string(e.step) + ": " + std::string(event_kind_name(e.kind)) + ": " + e.text;
}

std::size_t SimulationResult::count(Event::Kind k) const {
  return static_cast<std::size_t>(
      std::count_if(log.begin(), log.end(), [&](const Event& e) { return e.kind == k; }));
}

std::string mermaid_timeline(const std::vector<Event>& log) {
  std::ostringstream os;
  os << "timeline\n  title Supervisor events\n";
  for (const auto& e : log) {
    if (e.kind == Event::Kind::Control) continue;
    std::string text = e.text;
    std::replace(text.begin(), text.end(), ':', ' ');
    os << "  step " << e.step << " : " << event_kind_name(e.kind) << " " << text << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// The supervisor

namespace {

// One agent of the active loop while a cycle of the choreography runs.
struct Agent {
  enum class Role { Sensor, Estimator, Controller, Actuator };
  Role role = Role::Sensor;
  const TreeNode* state = nullptr;  // the state an estimator or sensor provides
  std::vector<double> inbox;
};

class Supervisor {
 public:
  Supervisor(const Scenario& sc, const ProcessGraph& p, const IndustrialDomain& d,
             const Repository& r, SimulationResult& out)
      : sc_(sc), domain_(d), repo_(r), out_(out), process_(p) {
    ctx_.plant = sc.plant;
    ctx_.dt = sc.dt;
    ctx_.lenergy_coefficient = sc.lenergy_coefficient;
    ctx_.process = &process_;
    plant_.tank_level = sc.level;
    last_known_ = sc.level;
  }

  int run() {
    if (!reconfigure(0, "initial configuration")) return 1;
    for (std::size_t k = 0; k < sc_.steps; ++k) {
      for (const auto& f : sc_.failures)
        if (f.step == k && !handle_failure(k, f.device, "scheduled failure")) return 1;
      double est = 0;
      for (int attempt = 0;; ++attempt) {
        try {
          est = cycle();
          break;
        } catch (const Error& e) {
          if (e.code() != "sensor-unavailable" || attempt > 0 || !detect(k)) {
            log(k, Event::Kind::Fatal, e.diagnostics().front().message);
            return 1;
          }
        }
      }
      last_known_ = est;
      out_.level.push_back(plant_.tank_level);
      out_.estimate.push_back(est);
      out_.active_tree.push_back(to_string(out_.loop.tree));

      plant_.pump_on = label_ == "ON";
      plant_ = plant_step(plant_, sc_.plant, sc_.demand_at(k), sc_.dt);
      out_.steps_run = k + 1;
    }
    return 0;
  }

 private:
  void log(std::size_t step, Event::Kind k, std::string text) {
    out_.log.push_back(Event{step, k, std::move(text)});
  }

  // Devices the world has lost but the knowledge base still lists.
  bool detect(std::size_t step) {
    for (const auto& d : process_.devices)
      if (d.alive && ctx_.failed_devices.count(d.name))
        return handle_failure(step, d.name, "sensor unavailable");
    return false;
  }

  bool handle_failure(std::size_t step, const std::string& device, const std::string& cause) {
    ctx_.failed_devices.insert(device);
    log(step, Event::Kind::Failure, "device " + device + " (" + cause + ")");
    try {
      process_ = remove_device(process_, device, sc_.actuator);
    } catch (const Error& e) {
      log(step, Event::Kind::Fatal, e.diagnostics().front().message);
      return false;
    }
    bool affected = false;
    for (const auto& s : out_.loop.tree.sensing_leaves())
      if (!process_.find_sensor(s.owner)) affected = true;
    if (!affected) return true;
    return reconfigure(step, "after losing " + device);
  }

  // translate -> traverse -> configure -> compose, picking the scenario's tree.
  bool reconfigure(std::size_t step, const std::string& why) {
    try {
      auto g = translate(process_, domain_);
      auto trees = traverse(sc_.root, g);
      if (trees.empty()) {
        log(step, Event::Kind::Fatal, "no estimation tree reaches " + sc_.root);
        return false;
      }
      const auto& tree = trees[sc_.tree <= trees.size() ? sc_.tree - 1 : 0];
      auto loop = configure(tree, repo_, sc_.controller, sc_.actuator, process_);
      auto live = is_live(loop.configuration, sc_.state_budget);
      if (!loop.certified || live.verdict != Verdict::True) {
        log(step, Event::Kind::Fatal, "the new control loop is not live");
        return false;
      }
      const bool initial = out_.log.empty();
      out_.loop = std::move(loop);
      bind_agents();
      log(step, initial ? Event::Kind::Start : Event::Kind::Reconfiguration,
          why + ": " + to_string(out_.loop.tree) + " (" + std::to_string(trees.size()) +
              " candidate tree" + (trees.size() == 1 ? "" : "s") + ")");
      return true;
    } catch (const Error& e) {
      log(step, Event::Kind::Fatal, e.diagnostics().front().message);
      return false;
    }
  }

  void bind_agents() {
    agents_.clear();
    auto walk = [&](auto&& self, const TreeNode& state) -> void {
      const auto& provider = state.children.at(0);
      Agent a;
      a.role = provider.node.kind == SegKind::Sensing ? Agent::Role::Sensor : Agent::Role::Estimator;
      a.state = &state;
      agents_[provider.node.id()] = a;
      for (const auto& c : provider.children) self(self, c);
    };
    walk(walk, out_.loop.tree.root);
    agents_[sc_.controller] = Agent{Agent::Role::Controller, nullptr, {}};
    agents_[sc_.actuator] = Agent{Agent::Role::Actuator, nullptr, {}};
  }

  double produce(const std::string& who) {
    auto& a = agents_.at(who);
    switch (a.role) {
      case Agent::Role::Sensor:
        return read_sensor(who, plant_, ctx_);
      case Agent::Role::Estimator: {
        const auto& provider = a.state->children.at(0);
        std::vector<SegNode> in;
        for (const auto& c : provider.children) in.push_back(c.node);
        auto v = apply_estimator(provider.node, a.state->node, in, a.inbox, ctx_, last_known_);
        a.inbox.clear();
        return v;
      }
      default:
        fail("internal", "'" + who + "' does not produce values");
    }
  }

  // Runs one round of the certified choreography and returns the level the
  // controller received.
  double cycle() {
    const GlobalProtocol* g = &*out_.loop.certified;
    double level = 0;
    while (true) {
      switch (g->kind()) {
        case GlobalProtocol::Kind::Rec:
          g = &g->body();
          continue;
        case GlobalProtocol::Kind::Pass: {
          double v = produce(g->sender().name());
          if (agents_.at(g->receiver().name()).role == Agent::Role::Controller) level = v;
          agents_.at(g->receiver().name()).inbox.push_back(v);
          g = &g->cont();
          continue;
        }
        case GlobalProtocol::Kind::Choice: {
          auto& ctl = agents_.at(g->sender().name());
          if (ctl.inbox.empty()) fail("internal", "the controller chose before it was informed");
          double seen = ctl.inbox.back();
          ctl.inbox.clear();
          auto d = control_decision(seen, sc_.low, sc_.high);
          if (d != Decision::Hold) {
            std::string label(decision_name(d));
            if (label != label_)
              log(plant_.time, Event::Kind::Control, "pump " + label + " at level " + std::to_string(seen));
            label_ = label;
          }
          const GlobalProtocol* next = nullptr;
          for (const auto& b : g->branches())
            if (b.label.name() == label_) next = &b.cont;
          if (!next) fail("signal-mismatch", "the choreography has no branch '" + label_ + "'");
          g = next;
          continue;
        }
        case GlobalProtocol::Kind::Var:
        case GlobalProtocol::Kind::End:
          return level;
      }
    }
  }

  const Scenario& sc_;
  const IndustrialDomain& domain_;
  const Repository& repo_;
  SimulationResult& out_;
  ProcessGraph process_;
  EstimationContext ctx_;
  PlantState plant_;
  double last_known_ = 0;
  std::string label_ = "OFF";
  std::map<std::string, Agent> agents_;
};

}  // namespace

SimulationResult run_scenario(const Scenario& sc, const ProcessGraph& process,
                              const IndustrialDomain& domain, const Repository& repository) {
  SimulationResult out;
  Supervisor s(sc, process, domain, repository, out);
  out.status = s.run();
  return out;
}

SimulationResult run_scenario(const Scenario& sc) {
  std::ifstream in(sc.script);
  if (!in) fail("io", "cannot read '" + sc.script.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Interpreter kb;
  auto r = kb.run(ss.str());
  if (!r.ok()) throw Error(r.diagnostics);
  const auto& p = kb.lookup(sc.process);
  const auto& repo = kb.lookup(sc.repository);
  if (p.kind != Value::Kind::Process)
    fail("kind-mismatch", "'" + sc.process + "' is not a process");
  if (repo.kind != Value::Kind::Repository)
    fail("kind-mismatch", "'" + sc.repository + "' is not a repository");
  return run_scenario(sc, *p.process, *p.domain, *repo.repository);
}

}  // namespace icps
