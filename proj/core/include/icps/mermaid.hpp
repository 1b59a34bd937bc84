#pragma once

// Mermaid text for graphs, trees and configurations.

#include <string>

#include "icps/estimation.hpp"
#include "icps/session.hpp"

namespace icps {

/// `flowchart LR`; states, estimators and sensing points carry the classes
/// `state`, `estimator` and `sensing`. An empty graph yields the header only.
std::string mermaid(const StateEstimationGraph& g);
std::string mermaid(const EstimationTree& t);

/// `sequenceDiagram` with one participant per binding. When `certified` is
/// given its message flow is drawn as well.
std::string mermaid(const LocalConfiguration& c, const GlobalProtocol* certified = nullptr);
std::string mermaid(const GlobalProtocol& g);

}  // namespace icps
