#pragma once

// Evaluates iCPS-DL commands against a session environment.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icps/configurator.hpp"
#include "icps/domain.hpp"
#include "icps/estimation.hpp"
#include "icps/process.hpp"
#include "icps/session.hpp"
#include "icps/syntax.hpp"

namespace icps {

/// A bound value. Derived values keep a pointer to what they came from so
/// that e.g. `configure trees[1] ...` can reach the process behind a tree.
struct Value {
  enum class Kind { Domain, Repository, Process, Graph, Trees, Tree, Local, Global };

  Kind kind = Kind::Domain;
  std::shared_ptr<const IndustrialDomain> domain;    // Domain; the domain of Repository/Process
  std::shared_ptr<const Repository> repository;
  std::shared_ptr<const ProcessGraph> process;       // Process; the source of Graph/Trees/Tree
  std::shared_ptr<const StateEstimationGraph> graph;
  std::shared_ptr<const std::vector<EstimationTree>> trees;
  std::shared_ptr<const EstimationTree> tree;
  std::shared_ptr<const LocalConfiguration> local;
  std::shared_ptr<const ControlLoopConfig> loop;     // set when a Local came from configure
  std::optional<GlobalProtocol> global;
};

std::string_view value_kind_name(Value::Kind k);

/// Surface text for `show`.
std::string show(const Value& v);
/// One-line description printed after a binding. Local configurations are
/// checked for liveness and deadlock-freedom within `state_budget` states.
std::string summary(const Value& v, std::size_t state_budget = 100000);
/// Mermaid text, or nullopt for kinds that have no diagram.
std::optional<std::string> diagram(const Value& v);

class Interpreter {
 public:
  struct Options {
    std::size_t state_budget = 100000;
  };

  Interpreter() = default;
  explicit Interpreter(Options o) : opts_(o) {}

  /// Runs one command and returns its printed output (possibly empty).
  /// Throws icps::Error; the environment is unchanged on failure.
  std::string execute(const Command& c);
  Value eval(const Expr& e);

  struct RunResult {
    std::string output;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
  };
  /// Parses `text`; on syntax errors nothing runs. Otherwise commands run in
  /// order and evaluation stops at the first failing one.
  RunResult run(std::string_view text);
  /// Like run(), but only declarations (domains, repositories, processes,
  /// configurations, protocols) are evaluated; every failure is reported.
  RunResult check(std::string_view text);

  bool has(const std::string& name) const { return env_.count(name) != 0; }
  /// Throws icps::Error("unbound-name").
  const Value& lookup(const std::string& name, SourcePos pos = {}) const;
  const std::map<std::string, Value>& bindings() const { return env_; }
  /// Most recent domain declaration; repositories and processes fall back
  /// on it when their domain name is not bound.
  std::shared_ptr<const IndustrialDomain> current_domain() const { return current_; }

 private:
  std::shared_ptr<const IndustrialDomain> resolve_domain(const std::string& name, SourcePos pos) const;
  Value expect(const Expr& e, Value::Kind k);

  Options opts_;
  std::map<std::string, Value> env_;
  std::shared_ptr<const IndustrialDomain> current_;
};

}  // namespace icps
