#include "icps/estimation.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace icps {

std::size_t StateEstimationGraph::add_node(SegNode n, bool is_static) {
  auto id = n.id();
  if (auto it = index_.find(id); it != index_.end()) return it->second;
  std::size_t k = nodes_.size();
  nodes_.push_back(std::move(n));
  static_.push_back(is_static ? 1 : 0);
  in_.emplace_back();
  out_.emplace_back();
  index_.emplace(std::move(id), k);
  return k;
}

bool StateEstimationGraph::add_edge(std::size_t from, std::size_t to) {
  auto& o = out_[from];
  if (std::find(o.begin(), o.end(), to) != o.end()) return false;
  o.push_back(to);
  in_[to].push_back(from);
  edges_.emplace_back(from, to);
  return true;
}

std::optional<std::size_t> StateEstimationGraph::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool StateEstimationGraph::has_edge(const std::string& from, const std::string& to) const {
  auto a = find(from);
  auto b = find(to);
  if (!a || !b) return false;
  const auto& o = out_[*a];
  return std::find(o.begin(), o.end(), *b) != o.end();
}

std::size_t StateEstimationGraph::count(SegKind k) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [k](const SegNode& n) { return n.kind == k; }));
}

StateEstimationGraph translate(const ProcessGraph& p, const IndustrialDomain& d) {
  StateEstimationGraph g;
  std::vector<Diagnostic> diags;

  for (const auto& c : p.components) {
    const auto* cls = d.find_class(c.class_name);
    if (!cls) fail("unknown-class", "'" + c.name + "' uses undeclared class '" + c.class_name + "'");
    for (const auto& a : cls->attributes) {
      bool is_prop = d.is_property(a);
      g.add_node(SegNode{is_prop ? SegKind::State : SegKind::Estimator, c.name, a},
                 is_prop && d.is_static_property(a));
    }
  }
  for (const auto& s : p.sensors) g.add_node(SegNode{SegKind::Sensing, s.name, s.property});

  auto link = [&](const std::string& from, const std::string& to) {
    auto a = g.find(from);
    auto b = g.find(to);
    if (!a || !b) fail("unknown-node", "edge " + from + " -> " + to + " leaves the graph");
    g.add_edge(*a, *b);
  };

  for (const auto& c : p.components) {
    const auto* cls = d.find_class(c.class_name);
    for (const auto& e : cls->edges) link(c.name + "." + e.from, c.name + "." + e.to);
  }

  for (const auto& conn : p.connections) {
    const auto* a = p.find_component(conn.from);
    const auto* b = p.find_component(conn.to);
    if (!a || !b) continue;  // sensing attachments are handled below
    bool reversed = false;
    const auto* rule = d.find_rule(a->class_name, b->class_name, &reversed);
    if (!rule) {
      diags.push_back(make_error("missing-rule",
                                 "no translation rule connects classes '" + a->class_name +
                                     "' and '" + b->class_name + "' (" + conn.from + "->" +
                                     conn.to + ")",
                                 conn.pos));
      continue;
    }
    const auto* src = reversed ? b : a;
    const auto* dst = reversed ? a : b;
    auto instance = [&](const QualifiedAttribute& q) {
      return (q.role == rule->source ? src->name : dst->name) + "." + q.attribute;
    };
    for (const auto& e : rule->edges) link(instance(e.from), instance(e.to));
  }

  for (const auto& s : p.sensors) {
    const auto* comp = p.attached_component(s.name);
    if (!comp) continue;
    link(s.name, comp->name + "." + s.property);
  }

  if (!diags.empty()) throw Error(std::move(diags));
  return g;
}

// ---------------------------------------------------------------------------
// Trees

namespace {

void collect_leaves(const TreeNode& n, std::vector<SegNode>& out) {
  if (n.node.kind == SegKind::Sensing) out.push_back(n.node);
  for (const auto& c : n.children) collect_leaves(c, out);
}

void collect_estimators(const TreeNode& n, std::vector<SegNode>& out) {
  for (const auto& c : n.children) collect_estimators(c, out);
  if (n.node.kind == SegKind::Estimator) out.push_back(n.node);
}

std::size_t depth_of(const TreeNode& n) {
  std::size_t d = 0;
  for (const auto& c : n.children) d = std::max(d, depth_of(c));
  return d + 1;
}

void print(std::ostream& os, const TreeNode& n) {
  switch (n.node.kind) {
    case SegKind::Sensing:
      os << n.node.id();
      return;
    case SegKind::State:
      os << n.node.id();
      if (!n.children.empty()) {
        os << " <- ";
        print(os, n.children.front());
      }
      return;
    case SegKind::Estimator:
      os << n.node.id() << "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) os << ", ";
        print(os, n.children[i]);
      }
      os << ")";
      return;
  }
}

// Dynamic and static inputs of estimator `e` when it produces `output`.
void split_inputs(const StateEstimationGraph& g, std::size_t e, std::size_t output,
                  std::vector<std::size_t>& dynamic, std::vector<std::size_t>& fixed) {
  for (auto v : g.in(e)) {
    if (v == output || g.node(v).kind != SegKind::State) continue;
    (g.is_static(v) ? fixed : dynamic).push_back(v);
  }
}

}  // namespace

std::vector<SegNode> EstimationTree::sensing_leaves() const {
  std::vector<SegNode> out;
  collect_leaves(root, out);
  return out;
}

std::vector<SegNode> EstimationTree::estimators() const {
  std::vector<SegNode> out;
  collect_estimators(root, out);
  return out;
}

std::size_t EstimationTree::depth() const { return depth_of(root); }

std::string to_string(const EstimationTree& t) {
  std::ostringstream os;
  print(os, t.root);
  return os.str();
}

std::vector<std::string> validate_tree(const EstimationTree& t, const StateEstimationGraph& g) {
  std::vector<std::string> problems;
  std::set<std::string> used_estimators;
  std::vector<std::string> path;

  std::function<void(const TreeNode&)> check = [&](const TreeNode& n) {
    const auto id = n.node.id();
    auto k = g.find(id);
    if (!k || !(g.node(*k) == n.node)) {
      problems.push_back("node '" + id + "' is not in the graph");
      return;
    }
    switch (n.node.kind) {
      case SegKind::Sensing:
        if (!n.children.empty()) problems.push_back("sensing node '" + id + "' has children");
        return;
      case SegKind::State: {
        if (std::find(path.begin(), path.end(), id) != path.end())
          problems.push_back("state '" + id + "' repeats on a root-to-leaf path");
        if (g.is_static(*k)) problems.push_back("static state '" + id + "' is expanded");
        if (n.children.size() != 1) {
          problems.push_back("state '" + id + "' needs exactly one provider");
          return;
        }
        const auto& c = n.children.front();
        if (c.node.kind == SegKind::State)
          problems.push_back("state '" + id + "' is provided by another state");
        else if (!g.has_edge(c.node.id(), id))
          problems.push_back("'" + c.node.id() + "' does not provide '" + id + "'");
        path.push_back(id);
        check(c);
        path.pop_back();
        return;
      }
      case SegKind::Estimator: {
        if (!used_estimators.insert(id).second)
          problems.push_back("estimator '" + id + "' used twice");
        if (path.empty()) {
          problems.push_back("estimator '" + id + "' has no output state");
          return;
        }
        auto out = g.find(path.back());
        std::vector<std::size_t> dynamic, fixed;
        split_inputs(g, *k, *out, dynamic, fixed);
        if (dynamic.empty()) problems.push_back("estimator '" + id + "' is a leaf");
        if (n.children.size() != dynamic.size()) {
          problems.push_back("estimator '" + id + "' has the wrong number of inputs");
          return;
        }
        for (std::size_t i = 0; i < dynamic.size(); ++i) {
          if (!(n.children[i].node == g.node(dynamic[i])))
            problems.push_back("estimator '" + id + "' input " + std::to_string(i + 1) +
                               " should be '" + g.node(dynamic[i]).id() + "'");
          check(n.children[i]);
        }
        std::vector<SegNode> want;
        for (auto f : fixed) want.push_back(g.node(f));
        if (n.preconfigured != want)
          problems.push_back("estimator '" + id + "' lists the wrong preconfigured states");
        return;
      }
    }
  };

  if (t.root.node.kind != SegKind::State) problems.push_back("root is not a state");
  check(t.root);
  return problems;
}

namespace {

struct Partial {
  TreeNode node;
  std::set<std::size_t> estimators;
};

class Enumerator {
 public:
  Enumerator(const StateEstimationGraph& g, std::size_t cap) : g_(g), cap_(cap) {}

  std::vector<Partial> resolve(std::size_t s, std::size_t depth) {
    std::vector<Partial> out;
    if (depth > cap_ || g_.is_static(s)) return out;
    on_path_.insert(s);

    for (auto u : g_.in(s))
      if (g_.node(u).kind == SegKind::Sensing)
        out.push_back(Partial{TreeNode{g_.node(s), {TreeNode{g_.node(u), {}, {}}}, {}}, {}});

    for (auto e : g_.in(s)) {
      if (g_.node(e).kind != SegKind::Estimator) continue;
      std::vector<std::size_t> dynamic, fixed;
      split_inputs(g_, e, s, dynamic, fixed);
      if (dynamic.empty()) continue;
      if (std::any_of(dynamic.begin(), dynamic.end(), [&](auto v) { return on_path_.count(v); }))
        continue;

      std::vector<std::vector<Partial>> options;
      bool feasible = true;
      for (auto v : dynamic) {
        options.push_back(resolve(v, depth + 1));
        if (options.back().empty()) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;

      std::vector<SegNode> pre;
      for (auto f : fixed) pre.push_back(g_.node(f));

      std::vector<const Partial*> pick(options.size());
      std::function<void(std::size_t, std::set<std::size_t>)> product =
          [&](std::size_t i, std::set<std::size_t> used) {
            if (i == options.size()) {
              TreeNode est{g_.node(e), {}, pre};
              for (const auto* p : pick) est.children.push_back(p->node);
              used.insert(e);
              out.push_back(Partial{TreeNode{g_.node(s), {std::move(est)}, {}}, std::move(used)});
              return;
            }
            for (const auto& cand : options[i]) {
              if (cand.estimators.count(e)) continue;
              bool clash = std::any_of(cand.estimators.begin(), cand.estimators.end(),
                                       [&](auto x) { return used.count(x); });
              if (clash) continue;
              auto next = used;
              next.insert(cand.estimators.begin(), cand.estimators.end());
              pick[i] = &cand;
              product(i + 1, std::move(next));
            }
          };
      product(0, {});
    }

    on_path_.erase(s);
    return out;
  }

 private:
  const StateEstimationGraph& g_;
  std::size_t cap_;
  std::set<std::size_t> on_path_;
};

}  // namespace

std::vector<EstimationTree> traverse(const std::string& root, const StateEstimationGraph& g,
                                     const TraverseOptions& opts) {
  auto k = g.find(root);
  if (!k || g.node(*k).kind != SegKind::State)
    fail("unknown-node", "'" + root + "' is not a state of the estimation graph");
  Enumerator en(g, opts.depth_cap);
  std::vector<EstimationTree> out;
  std::set<std::string> seen;
  for (auto& p : en.resolve(*k, 1)) {
    EstimationTree t{std::move(p.node)};
    if (seen.insert(to_string(t)).second) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace icps
