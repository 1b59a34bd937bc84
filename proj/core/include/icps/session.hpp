#pragma once

// Configurations of interacting agents: synchronous communication steps,
// budgeted deadlock-freedom and liveness checks, and the composition /
// projection relation between local configurations and global protocols.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icps/common.hpp"
#include "icps/protocol.hpp"

namespace icps {

/// Participant -> local protocol, kept in declaration order. Declaration order
/// matters for printing and for the deterministic composition strategy;
/// equality ignores it.
class LocalConfiguration {
 public:
  using Binding = std::pair<Participant, LocalProtocol>;

  LocalConfiguration() = default;
  LocalConfiguration(std::initializer_list<Binding> bs);

  /// Throws icps::Error("duplicate-participant") if `p` is already bound.
  void bind(Participant p, LocalProtocol proto);
  /// Replaces an existing binding; throws if `p` is unbound.
  void rebind(const Participant& p, LocalProtocol proto);

  const LocalProtocol* find(const Participant& p) const;
  const LocalProtocol& at(const Participant& p) const;
  bool contains(const Participant& p) const { return find(p) != nullptr; }

  const std::vector<Binding>& bindings() const { return bindings_; }
  std::vector<Participant> domain() const;
  std::size_t count() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// Disjoint union; throws on a shared participant.
  friend LocalConfiguration operator+(const LocalConfiguration& a, const LocalConfiguration& b);

  friend bool operator==(const LocalConfiguration& a, const LocalConfiguration& b);
  /// Order-independent, consistent with operator==.
  std::size_t hash() const;

 private:
  std::vector<Binding> bindings_;
};

std::size_t size(const LocalConfiguration& c);
LocalConfiguration rename_participants(const LocalConfiguration& c,
                                       const std::map<std::string, std::string>& mapping);
LocalConfiguration sort_choices(const LocalConfiguration& c);

/// `local { p = ... q = ... }` surface form, one binding per line.
std::string to_string(const LocalConfiguration& c);
std::ostream& operator<<(std::ostream& os, const LocalConfiguration& c);

struct CommAction {
  Participant sender;
  Participant receiver;
  MessageType payload;

  auto operator<=>(const CommAction&) const = default;
};

std::ostream& operator<<(std::ostream& os, const CommAction& a);
std::string to_string(const CommAction& a);

/// Participants that can still act; `t. end` counts as finished.
std::vector<Participant> active_participants(const LocalConfiguration& c);

std::optional<LocalConfiguration> comm_step(const LocalConfiguration& c, const CommAction& a);

/// Every action for which comm_step is defined, in sender declaration order.
std::vector<CommAction> enabled(const LocalConfiguration& c);

/// All one-step successors, including distinct continuations of the same action.
std::vector<std::pair<CommAction, LocalConfiguration>> successors(const LocalConfiguration& c);

// ---------------------------------------------------------------------------
// Budgeted checks

enum class Verdict { True, False, BudgetExceeded };
std::string_view verdict_name(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::True;
  std::size_t states = 0;
  /// For False: a path from the initial configuration to the offending one.
  std::vector<CommAction> trace;
  /// For a liveness failure: a participant that can never act again.
  std::optional<Participant> starving;

  bool holds() const { return verdict == Verdict::True; }
};

/// Reachable configuration graph. `complete` is false when the budget ran out.
struct StateGraph {
  std::vector<LocalConfiguration> states;
  std::vector<std::vector<std::pair<CommAction, std::size_t>>> edges;
  std::vector<std::size_t> parent;  // BFS tree, parent[0] == 0
  std::vector<std::optional<CommAction>> via;
  bool complete = true;
  /// States [0, expanded) have their full successor lists.
  std::size_t expanded = 0;

  std::vector<CommAction> path_to(std::size_t state) const;
};

StateGraph explore(const LocalConfiguration& c, std::size_t state_budget);

CheckResult is_deadlock_free(const LocalConfiguration& c, std::size_t state_budget);
CheckResult is_live(const LocalConfiguration& c, std::size_t state_budget);

// ---------------------------------------------------------------------------
// Composition and projection

struct CompositionError {
  std::string rule;  // "pass", "choice", "rec", "var", "end"
  std::string message;
  std::vector<Participant> participants;
  LocalConfiguration stuck;

  Diagnostic to_diagnostic(SourcePos pos = {}) const;
};

struct Composition {
  GlobalProtocol global;
  /// Rule applications plus role inspections; linear in size(c).
  std::size_t steps = 0;
};

Result<Composition, CompositionError> compose(const LocalConfiguration& c);

struct ProjectionError {
  std::string message;
  std::vector<Participant> participants;

  Diagnostic to_diagnostic(SourcePos pos = {}) const;
};

/// Projects onto `roles` (in that order). Every participant of `g` must be
/// listed; extra roles receive `end`.
Result<LocalConfiguration, ProjectionError> project(const GlobalProtocol& g,
                                                    const std::vector<Participant>& roles);
/// Projects onto participants(g) in order of first appearance.
Result<LocalConfiguration, ProjectionError> project(const GlobalProtocol& g);

}  // namespace icps

template <>
struct std::hash<icps::LocalConfiguration> {
  std::size_t operator()(const icps::LocalConfiguration& c) const noexcept { return c.hash(); }
};
