#include "icps/interpreter.hpp"

#include <fstream>
#include <sstream>

#include "icps/mermaid.hpp"

namespace icps {

std::string_view value_kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Domain:
      return "domain";
    case Value::Kind::Repository:
      return "repository";
    case Value::Kind::Process:
      return "process";
    case Value::Kind::Graph:
      return "state estimation graph";
    case Value::Kind::Trees:
      return "tree list";
    case Value::Kind::Tree:
      return "estimation tree";
    case Value::Kind::Local:
      return "local configuration";
    case Value::Kind::Global:
      return "global protocol";
  }
  return "value";
}

namespace {

std::string plural(std::size_t n, const std::string& word) {
  if (n == 1) return "1 " + word;
  if (word.back() == 'y') return std::to_string(n) + " " + word.substr(0, word.size() - 1) + "ies";
  if (word.back() == 's') return std::to_string(n) + " " + word + "es";
  return std::to_string(n) + " " + word + "s";
}

std::string show_graph(const StateEstimationGraph& g) {
  std::ostringstream os;
  os << "graph {\n";
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const auto& n = g.node(i);
    const char* k = n.kind == SegKind::State ? "state" : n.kind == SegKind::Estimator ? "estimator" : "sensing";
    os << "  " << k << " " << n.id() << (g.is_static(i) ? " (static)" : "") << "\n";
  }
  for (auto [a, b] : g.edges()) os << "  " << g.node(a).id() << " -> " << g.node(b).id() << "\n";
  os << "}";
  return os.str();
}

}  // namespace

std::string show(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Domain:
      return print_domain(*v.domain);
    case Value::Kind::Repository:
      return print_repository(*v.repository);
    case Value::Kind::Process:
      return print_process(v.process->to_decl());
    case Value::Kind::Graph:
      return show_graph(*v.graph);
    case Value::Kind::Trees: {
      std::ostringstream os;
      for (std::size_t i = 0; i < v.trees->size(); ++i) {
        if (i) os << "\n";
        os << "[" << i + 1 << "] " << to_string((*v.trees)[i]);
      }
      return os.str();
    }
    case Value::Kind::Tree:
      return to_string(*v.tree);
    case Value::Kind::Local:
      return to_string(*v.local);
    case Value::Kind::Global:
      return print_global(*v.global);
  }
  return {};
}

std::string summary(const Value& v, std::size_t state_budget) {
  switch (v.kind) {
    case Value::Kind::Domain:
      return "domain with " + plural(v.domain->properties.size(), "property") +
             ", " + plural(v.domain->model.size(), "estimator") + ", " +
             plural(v.domain->classes.size(), "class") + ", " +
             plural(v.domain->rules.size(), "translation rule");
    case Value::Kind::Repository:
      return "repository for '" + v.repository->name + "' with " +
             plural(v.repository->templates.size(), "template");
    case Value::Kind::Process: {
      std::size_t alive = 0;
      for (const auto& d : v.process->devices) alive += d.alive ? 1 : 0;
      return "process with " + plural(v.process->components.size(), "component") + ", " +
             plural(v.process->sensors.size(), "sensing point") + ", " + std::to_string(alive) +
             "/" + std::to_string(v.process->devices.size()) + " devices alive";
    }
    case Value::Kind::Graph:
      return "state estimation graph with " + plural(v.graph->nodes().size(), "node") + " and " +
             plural(v.graph->edges().size(), "edge");
    case Value::Kind::Trees: {
      std::string s = plural(v.trees->size(), "estimation tree");
      if (!v.trees->empty()) s += " rooted at " + v.trees->front().target().id();
      return s;
    }
    case Value::Kind::Tree:
      return "estimation tree " + to_string(*v.tree);
    case Value::Kind::Local: {
      std::string s = "local configuration with " + plural(v.local->count(), "participant");
      if (v.loop && v.loop->certified) s += ", composes";
      s += "; live: " + std::string(verdict_name(is_live(*v.local, state_budget).verdict));
      s += ", deadlock-free: " +
           std::string(verdict_name(is_deadlock_free(*v.local, state_budget).verdict));
      return s;
    }
    case Value::Kind::Global:
      return "global protocol over " + plural(participants(*v.global).size(), "participant");
  }
  return {};
}

std::optional<std::string> diagram(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Graph:
      return mermaid(*v.graph);
    case Value::Kind::Tree:
      return mermaid(*v.tree);
    case Value::Kind::Local: {
      if (v.loop && v.loop->certified) return mermaid(*v.local, &*v.loop->certified);
      auto res = compose(*v.local);
      if (res) return mermaid(*v.local, &res.value().global);
      return mermaid(*v.local);
    }
    case Value::Kind::Global:
      return mermaid(*v.global);
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

namespace {

// Stamps `pos` on diagnostics that carry no position of their own.
[[noreturn]] void rethrow_at(const Error& e, SourcePos pos) {
  auto ds = e.diagnostics();
  for (auto& d : ds)
    if (!d.pos.known()) d.pos = pos;
  throw Error(std::move(ds));
}

}  // namespace

const Value& Interpreter::lookup(const std::string& name, SourcePos pos) const {
  auto it = env_.find(name);
  if (it == env_.end()) fail("unbound-name", "'" + name + "' is not bound", pos);
  return it->second;
}

std::shared_ptr<const IndustrialDomain> Interpreter::resolve_domain(const std::string& name,
                                                                    SourcePos pos) const {
  auto it = env_.find(name);
  if (it != env_.end() && it->second.kind == Value::Kind::Domain) return it->second.domain;
  if (current_) return current_;
  fail("unknown-domain", "no domain named '" + name + "' has been declared", pos);
}

Value Interpreter::expect(const Expr& e, Value::Kind k) {
  Value v = eval(e);
  if (v.kind != k)
    fail("kind-mismatch",
         "expected a " + std::string(value_kind_name(k)) + ", found a " +
             std::string(value_kind_name(v.kind)),
         e.pos);
  return v;
}

Value Interpreter::eval(const Expr& e) {
  try {
    Value v;
    switch (e.kind) {
      case Expr::Kind::Name:
        return lookup(e.name, e.pos);

      case Expr::Kind::Index: {
        const Value& base = lookup(e.name, e.pos);
        if (base.kind != Value::Kind::Trees)
          fail("kind-mismatch", "only tree lists can be indexed; '" + e.name + "' is a " +
                                    std::string(value_kind_name(base.kind)), e.pos);
        if (e.index < 1 || e.index > base.trees->size())
          fail("index-range", "index " + std::to_string(e.index) + " is out of range; '" + e.name +
                                  "' holds " + plural(base.trees->size(), "tree"), e.pos);
        v = base;
        v.kind = Value::Kind::Tree;
        v.tree = std::make_shared<EstimationTree>((*base.trees)[e.index - 1]);
        v.trees.reset();
        return v;
      }

      case Expr::Kind::Domain: {
        auto ds = validate_domain(*e.domain);
        if (!ds.empty()) throw Error(ds);
        v.kind = Value::Kind::Domain;
        v.domain = e.domain;
        return v;
      }

      case Expr::Kind::Repository: {
        auto d = resolve_domain(e.repository->name, e.pos);
        auto ds = validate_repository(*e.repository, d.get());
        if (!ds.empty()) throw Error(ds);
        v.kind = Value::Kind::Repository;
        v.repository = e.repository;
        v.domain = d;
        return v;
      }

      case Expr::Kind::Process: {
        auto d = resolve_domain(e.process->domain, e.pos);
        v.kind = Value::Kind::Process;
        v.process = std::make_shared<ProcessGraph>(build_process(*e.process, *d));
        v.domain = d;
        return v;
      }

      case Expr::Kind::Local:
        v.kind = Value::Kind::Local;
        v.local = e.local;
        return v;

      case Expr::Kind::Global:
        v.kind = Value::Kind::Global;
        v.global = e.global;
        return v;

      case Expr::Kind::Translate: {
        Value p = expect(*e.args[0], Value::Kind::Process);
        v.kind = Value::Kind::Graph;
        v.graph = std::make_shared<StateEstimationGraph>(translate(*p.process, *p.domain));
        v.process = p.process;
        v.domain = p.domain;
        return v;
      }

      case Expr::Kind::Traverse: {
        Value g = expect(*e.args[0], Value::Kind::Graph);
        v = g;
        v.kind = Value::Kind::Trees;
        v.trees = std::make_shared<std::vector<EstimationTree>>(traverse(e.name, *g.graph));
        return v;
      }

      case Expr::Kind::Configure: {
        Value t = expect(*e.args[0], Value::Kind::Tree);
        Value r = expect(*e.args[1], Value::Kind::Repository);
        auto loop = std::make_shared<ControlLoopConfig>(
            configure(*t.tree, *r.repository, e.name, e.extra, *t.process));
        v.kind = Value::Kind::Local;
        v.local = std::make_shared<LocalConfiguration>(loop->configuration);
        v.loop = loop;
        v.process = t.process;
        v.domain = t.domain;
        return v;
      }

      case Expr::Kind::Compose: {
        Value l = expect(*e.args[0], Value::Kind::Local);
        auto res = compose(*l.local);
        if (!res) throw Error(res.error().to_diagnostic(e.pos));
        v.kind = Value::Kind::Global;
        v.global = res.value().global;
        return v;
      }

      case Expr::Kind::Project: {
        Value g = expect(*e.args[0], Value::Kind::Global);
        auto res = project(*g.global);
        if (!res) throw Error(res.error().to_diagnostic(e.pos));
        v.kind = Value::Kind::Local;
        v.local = std::make_shared<LocalConfiguration>(res.value());
        return v;
      }

      case Expr::Kind::RemoveDevice: {
        Value p = expect(*e.args[0], Value::Kind::Process);
        v = p;
        v.process = std::make_shared<ProcessGraph>(remove_device(*p.process, e.name));
        return v;
      }
    }
    fail("internal", "unhandled expression", e.pos);
  } catch (const Error& err) {
    rethrow_at(err, e.pos);
  }
}

std::string Interpreter::execute(const Command& c) {
  try {
    switch (c.kind) {
      case Command::Kind::Bind: {
        Value v = eval(*c.expr);
        if (v.kind == Value::Kind::Domain) current_ = v.domain;
        auto s = c.name + ": " + summary(v, opts_.state_budget);
        env_[c.name] = std::move(v);
        return s;
      }
      case Command::Kind::Eval: {
        Value v = eval(*c.expr);
        if (v.kind == Value::Kind::Domain) {
          current_ = v.domain;
          return summary(v);
        }
        if (v.kind == Value::Kind::Repository || v.kind == Value::Kind::Process) return summary(v);
        return show(v);
      }
      case Command::Kind::Show:
        return show(eval(*c.expr));
      case Command::Kind::Mermaid: {
        Value v = eval(*c.expr);
        auto text = diagram(v);
        if (!text)
          fail("no-diagram", "a " + std::string(value_kind_name(v.kind)) + " has no diagram", c.pos);
        std::ofstream out(c.path);
        if (!out) fail("io", "cannot write '" + c.path + "'", c.pos);
        out << *text;
        return "wrote " + c.path;
      }
    }
  } catch (const Error& err) {
    rethrow_at(err, c.pos);
  }
  return {};
}

Interpreter::RunResult Interpreter::run(std::string_view text) {
  RunResult r;
  auto parsed = parse(text);
  if (!parsed.ok()) {
    r.diagnostics = parsed.diagnostics;
    return r;
  }
  for (const auto& c : parsed.commands) {
    try {
      auto out = execute(c);
      if (!out.empty()) r.output += out + "\n";
    } catch (const Error& e) {
      r.diagnostics = e.diagnostics();
      break;
    }
  }
  return r;
}

Interpreter::RunResult Interpreter::check(std::string_view text) {
  RunResult r;
  auto parsed = parse(text);
  if (!parsed.ok()) {
    r.diagnostics = parsed.diagnostics;
    return r;
  }
  for (const auto& c : parsed.commands) {
    switch (c.expr->kind) {
      case Expr::Kind::Domain:
      case Expr::Kind::Repository:
      case Expr::Kind::Process:
      case Expr::Kind::Local:
      case Expr::Kind::Global:
        break;
      default:
        continue;
    }
    if (c.kind == Command::Kind::Mermaid) continue;
    try {
      execute(c);
    } catch (const Error& e) {
      r.diagnostics.insert(r.diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
    }
  }
  return r;
}

}  // namespace icps
