#include "icps/mermaid.hpp"

#include <map>
#include <sstream>

namespace icps {

namespace {

const char* prefix(SegKind k) {
  switch (k) {
    case SegKind::State:
      return "st_";
    case SegKind::Estimator:
      return "es_";
    case SegKind::Sensing:
      return "se_";
  }
  return "n_";
}

const char* css_class(SegKind k) {
  switch (k) {
    case SegKind::State:
      return "state";
    case SegKind::Estimator:
      return "estimator";
    case SegKind::Sensing:
      return "sensing";
  }
  return "state";
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '.') c = '_';
  return out;
}

std::string node_id(const SegNode& n) { return prefix(n.kind) + sanitize(n.id()); }

// hexagon for states, box for estimators, trapezoid for sensing points
std::string shape(const std::string& id, const SegNode& n) {
  const auto label = "\"" + n.id() + "\"";
  switch (n.kind) {
    case SegKind::State:
      return id + "{{" + label + "}}";
    case SegKind::Estimator:
      return id + "[" + label + "]";
    case SegKind::Sensing:
      return id + "[/" + label + "\\]";
  }
  return id;
}

void class_defs(std::ostream& os) {
  os << "  classDef state fill:#fff4d6,stroke:#b8860b\n"
     << "  classDef estimator fill:#dbe9ff,stroke:#1f4e9c\n"
     << "  classDef sensing fill:#e3f6e3,stroke:#2e7d32\n";
}

}  // namespace

std::string mermaid(const StateEstimationGraph& g) {
  std::ostringstream os;
  os << "flowchart LR\n";
  if (g.nodes().empty()) return os.str();
  class_defs(os);
  for (const auto& n : g.nodes()) {
    const auto id = node_id(n);
    os << "  " << shape(id, n) << ":::" << css_class(n.kind) << "\n";
  }
  for (auto [a, b] : g.edges()) os << "  " << node_id(g.node(a)) << " --> " << node_id(g.node(b)) << "\n";
  return os.str();
}

std::string mermaid(const EstimationTree& t) {
  std::ostringstream os;
  os << "flowchart LR\n";
  class_defs(os);
  std::map<std::string, int> seen;
  auto fresh = [&](const SegNode& n) {
    auto id = node_id(n);
    int k = ++seen[id];
    return k == 1 ? id : id + "_" + std::to_string(k);
  };
  std::ostringstream edges;
  auto walk = [&](auto&& self, const TreeNode& n) -> std::string {
    const auto id = fresh(n.node);
    os << "  " << shape(id, n.node) << ":::" << css_class(n.node.kind) << "\n";
    for (const auto& c : n.children) {
      auto cid = self(self, c);
      edges << "  " << cid << " --> " << id << "\n";
    }
    for (const auto& s : n.preconfigured) {
      auto sid = fresh(s);
      os << "  " << shape(sid, s) << ":::" << css_class(s.kind) << "\n";
      edges << "  " << sid << " -. preconfigured .-> " << id << "\n";
    }
    return id;
  };
  walk(walk, t.root);
  os << edges.str();
  return os.str();
}

namespace {

std::string actor(const Participant& p) { return sanitize(p.name()); }

void flow(std::ostream& os, const GlobalProtocol& g, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
    case GlobalProtocol::Kind::Var:
      return;
    case GlobalProtocol::Kind::Pass:
      os << pad << actor(g.sender()) << "->>" << actor(g.receiver()) << ": " << g.payload().name()
         << "\n";
      flow(os, g.cont(), indent);
      return;
    case GlobalProtocol::Kind::Choice: {
      bool first = true;
      for (const auto& b : g.branches()) {
        os << pad << (first ? "alt " : "else ") << b.label.name() << "\n";
        os << pad << "  " << actor(g.sender()) << "->>" << actor(g.receiver()) << ": "
           << g.enum_type().name() << "." << b.label.name() << "\n";
        flow(os, b.cont, indent + 1);
        first = false;
      }
      os << pad << "end\n";
      return;
    }
    case GlobalProtocol::Kind::Rec:
      os << pad << "loop " << g.label() << "\n";
      flow(os, g.body(), indent + 1);
      os << pad << "end\n";
      return;
  }
}

}  // namespace

std::string mermaid(const LocalConfiguration& c, const GlobalProtocol* certified) {
  std::ostringstream os;
  os << "sequenceDiagram\n";
  for (const auto& [p, _] : c.bindings())
    os << "  participant " << actor(p) << " as " << p.name() << "\n";
  if (certified) flow(os, *certified, 1);
  return os.str();
}

std::string mermaid(const GlobalProtocol& g) {
  std::ostringstream os;
  os << "sequenceDiagram\n";
  for (const auto& p : participants(g)) os << "  participant " << actor(p) << " as " << p.name() << "\n";
  flow(os, g, 1);
  return os.str();
}

}  // namespace icps
