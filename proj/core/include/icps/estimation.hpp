#pragma once

// State estimation graphs and the estimation trees found in them.

#include <cstddef>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "icps/common.hpp"
#include "icps/domain.hpp"
#include "icps/process.hpp"

namespace icps {

enum class SegKind { State, Estimator, Sensing };

/// `owner` is the component for states and estimators and the sensing point
/// itself for sensing nodes; `attribute` is the property, the estimator, or
/// the measured property respectively.
struct SegNode {
  SegKind kind = SegKind::State;
  std::string owner;
  std::string attribute;

  /// `t.head`, `t.tank_mass`, `s6`.
  std::string id() const { return kind == SegKind::Sensing ? owner : owner + "." + attribute; }

  auto operator<=>(const SegNode&) const = default;
};

class StateEstimationGraph {
 public:
  std::size_t add_node(SegNode n, bool is_static = false);
  /// Ignores duplicates; returns false for them.
  bool add_edge(std::size_t from, std::size_t to);

  const std::vector<SegNode>& nodes() const { return nodes_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& in(std::size_t n) const { return in_[n]; }
  const std::vector<std::size_t>& out(std::size_t n) const { return out_[n]; }
  const SegNode& node(std::size_t n) const { return nodes_[n]; }
  bool is_static(std::size_t n) const { return static_[n]; }

  /// Looks up by id(); state and estimator ids never collide with each other
  /// because attribute names are unique across a domain.
  std::optional<std::size_t> find(const std::string& id) const;
  bool has_edge(const std::string& from, const std::string& to) const;

  std::size_t count(SegKind k) const;

 private:
  std::vector<SegNode> nodes_;
  std::vector<char> static_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> in_, out_;
  std::map<std::string, std::size_t> index_;
};

/// Throws icps::Error("missing-rule") when connected classes have no rule.
StateEstimationGraph translate(const ProcessGraph& p, const IndustrialDomain& d);

/// A tree oriented toward its root. State nodes have one child (their
/// provider); estimator nodes have their dynamic inputs as children; sensing
/// nodes are leaves. Estimators also list the static states they rely on.
struct TreeNode {
  SegNode node;
  std::vector<TreeNode> children;
  std::vector<SegNode> preconfigured;

  bool operator==(const TreeNode&) const = default;
};

struct EstimationTree {
  TreeNode root;

  const SegNode& target() const { return root.node; }
  std::vector<SegNode> sensing_leaves() const;
  /// Estimator nodes, children before parents.
  std::vector<SegNode> estimators() const;
  std::size_t depth() const;

  bool operator==(const EstimationTree&) const = default;
};

/// `t.head <- t.tank_mass(p1.flow <- s5, p2.flow <- s7)`
std::string to_string(const EstimationTree& t);

/// Empty iff `t` is a well-formed estimation tree of `g`.
std::vector<std::string> validate_tree(const EstimationTree& t, const StateEstimationGraph& g);

struct TraverseOptions {
  std::size_t depth_cap = 16;
};

/// Every estimation tree rooted at state `root`. Trees that read the root
/// directly come first; the rest follow depth-first discovery over inputs in
/// edge order. Throws icps::Error("unknown-node") if `root` is not a state.
std::vector<EstimationTree> traverse(const std::string& root, const StateEstimationGraph& g,
                                     const TraverseOptions& opts = {});

}  // namespace icps
