#pragma once

// A desk-scale autonomic supervisor for the tank/pump running example: plant
// physics, sensing, a choreography-driven control loop, and reconfiguration
// after device failures.

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "icps/configurator.hpp"
#include "icps/estimation.hpp"
#include "icps/process.hpp"

namespace icps {

struct PlantParams {
  double area = 1.0;
  double capacity = 3.0;
  double pump_rate = 2.0;
};

/// `inflow` and `outflow` are the flows applied by the last step.
struct PlantState {
  double tank_level = 1.0;
  double inflow = 0.0;
  double outflow = 0.0;
  bool pump_on = false;
  std::size_t time = 0;
};

/// Explicit Euler mass balance, level clamped to [0, capacity].
PlantState plant_step(const PlantState& s, const PlantParams& p, double demand, double dt);

enum class Decision { On, Off, Hold };
std::string_view decision_name(Decision d);

Decision control_decision(double level_estimate, double low, double high);

/// What the estimators know about the process, plus the plant it runs on.
struct EstimationContext {
  const ProcessGraph* process = nullptr;  // the knowledge base's view
  PlantParams plant;
  double dt = 0.1;
  double lenergy_coefficient = 1.0;
  std::set<std::string> failed_devices;   // the physical world's view
};

/// Value a sensing point reads from the plant. Throws
/// icps::Error("sensor-unavailable") when its device has failed.
double read_sensor(const std::string& sensor, const PlantState& s, const EstimationContext& ctx);

/// Applies estimator `est` producing `output` from `inputs`. `last_known` is
/// the initial condition used by storage (head) estimators.
double apply_estimator(const SegNode& est, const SegNode& output, const std::vector<SegNode>& inputs,
                       const std::vector<double>& values, const EstimationContext& ctx,
                       double last_known);

/// Evaluates a tree rooted at the tank head bottom-up.
double estimate_level(const EstimationTree& tree, const PlantState& s, const EstimationContext& ctx,
                      double last_known);

struct Failure {
  std::string device;
  std::size_t step = 0;
};

struct Scenario {
  std::filesystem::path script;  // knowledge base, relative to the scenario file
  std::string process = "simple";
  std::string repository = "agents";
  std::string controller = "controller";
  std::string actuator = "u";
  std::string root = "t.head";

  double dt = 0.1;
  std::size_t steps = 500;
  PlantParams plant;
  double low = 0.5;
  double high = 2.0;
  double level = 1.0;
  std::vector<double> demand{1.0};  // per step; the last value repeats
  double lenergy_coefficient = 1.0;
  std::size_t tree = 1;             // 1-based choice from each forest
  std::size_t state_budget = 100000;
  std::vector<Failure> failures;

  double demand_at(std::size_t step) const;
};

/// `key value` lines and `fail <device> at <step>`; '#' starts a comment.
/// Throws icps::Error with positions.
Scenario parse_scenario(std::string_view text);
/// Reads a scenario file and makes its script path absolute.
Scenario load_scenario(const std::filesystem::path& file);

struct Event {
  enum class Kind { Start, Failure, Reconfiguration, Control, Fatal };
  std::size_t step = 0;
  Kind kind = Kind::Control;
  std::string text;
};
std::string_view event_kind_name(Event::Kind k);
/// `step 50: reconfiguration: ...`
std::string to_string(const Event& e);

struct SimulationResult {
  int status = 0;  // 0 on completion
  std::size_t steps_run = 0;
  std::vector<Event> log;
  std::vector<double> level;     // plant level seen by each cycle
  std::vector<double> estimate;  // what the control loop delivered to the controller
  std::vector<std::string> active_tree;  // per step
  ControlLoopConfig loop;        // last active loop

  std::size_t count(Event::Kind k) const;
};

/// Runs a scenario over an already built knowledge base.
SimulationResult run_scenario(const Scenario& sc, const ProcessGraph& process,
                              const IndustrialDomain& domain, const Repository& repository);

/// Loads `sc.script` through the interpreter, then runs the scenario.
SimulationResult run_scenario(const Scenario& sc);

/// Mermaid `timeline` of failures and reconfigurations.
std::string mermaid_timeline(const std::vector<Event>& log);

}  // namespace icps
