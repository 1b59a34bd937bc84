#pragma once

// Turns an estimation tree plus a controller and an actuator into a control
// loop configuration, and certifies it by composition.

#include <optional>
#include <string>
#include <vector>

#include "icps/domain.hpp"
#include "icps/estimation.hpp"
#include "icps/process.hpp"
#include "icps/session.hpp"

namespace icps {

struct Assignment {
  Participant participant;
  std::string template_name;
  std::string node;  // sensing point, estimator node, or actuator instance

  bool operator==(const Assignment&) const = default;
};

struct ControlLoopConfig {
  LocalConfiguration configuration;
  std::vector<Assignment> assignments;  // configuration order
  std::optional<GlobalProtocol> certified;
  std::size_t compose_steps = 0;

  EstimationTree tree;
  std::string controller;
  std::string actuator;

  const Assignment* assignment_of(const std::string& participant) const;
};

/// Instantiates templates without composing. Participants appear with
/// children before parents, then the controller, then the actuator.
ControlLoopConfig instantiate(const EstimationTree& tree, const Repository& r,
                              const std::string& controller_template,
                              const std::string& actuator, const ProcessGraph& p);

/// instantiate() followed by compose(); throws icps::Error("composition")
/// when the result does not compose.
ControlLoopConfig configure(const EstimationTree& tree, const Repository& r,
                            const std::string& controller_template, const std::string& actuator,
                            const ProcessGraph& p);

}  // namespace icps
