#include "icps/session.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace icps {

// ---------------------------------------------------------------------------
// LocalConfiguration

LocalConfiguration::LocalConfiguration(std::initializer_list<Binding> bs) {
  for (const auto& [p, t] : bs) bind(p, t);
}

void LocalConfiguration::bind(Participant p, LocalProtocol proto) {
  if (contains(p)) fail("duplicate-participant", "participant '" + p.name() + "' bound twice");
  bindings_.emplace_back(std::move(p), std::move(proto));
}

void LocalConfiguration::rebind(const Participant& p, LocalProtocol proto) {
  for (auto& b : bindings_)
    if (b.first == p) {
      b.second = std::move(proto);
      return;
    }
  fail("unknown-participant", "participant '" + p.name() + "' is not bound");
}

const LocalProtocol* LocalConfiguration::find(const Participant& p) const {
  for (const auto& b : bindings_)
    if (b.first == p) return &b.second;
  return nullptr;
}

const LocalProtocol& LocalConfiguration::at(const Participant& p) const {
  if (const auto* t = find(p)) return *t;
  fail("unknown-participant", "participant '" + p.name() + "' is not bound");
}

std::vector<Participant> LocalConfiguration::domain() const {
  std::vector<Participant> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) out.push_back(b.first);
  return out;
}

LocalConfiguration operator+(const LocalConfiguration& a, const LocalConfiguration& b) {
  LocalConfiguration out = a;
  for (const auto& [p, t] : b.bindings()) out.bind(p, t);
  return out;
}

bool operator==(const LocalConfiguration& a, const LocalConfiguration& b) {
  if (a.count() != b.count()) return false;
  const auto& xs = a.bindings_;
  const auto& ys = b.bindings_;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Fast path for identical ordering, which is the common case.
    if (xs[i].first == ys[i].first) {
      if (!(xs[i].second == ys[i].second)) return false;
      continue;
    }
    const auto* t = b.find(xs[i].first);
    if (!t || !(*t == xs[i].second)) return false;
  }
  return true;
}

std::size_t LocalConfiguration::hash() const {
  std::size_t h = 0;
  for (const auto& [p, t] : bindings_) {
    std::size_t e = std::hash<std::string>{}(p.name());
    hash_combine(e, t.hash());
    h += e * 0x100000001b3ULL;
  }
  return h;
}

std::size_t size(const LocalConfiguration& c) {
  std::size_t n = 0;
  for (const auto& b : c.bindings()) n += size(b.second);
  return n;
}

LocalConfiguration rename_participants(const LocalConfiguration& c,
                                       const std::map<std::string, std::string>& mapping) {
  LocalConfiguration out;
  for (const auto& [p, t] : c.bindings()) {
    auto it = mapping.find(p.name());
    out.bind(it == mapping.end() ? p : Participant(it->second), rename_participants(t, mapping));
  }
  return out;
}

LocalConfiguration sort_choices(const LocalConfiguration& c) {
  LocalConfiguration out;
  for (const auto& [p, t] : c.bindings()) out.bind(p, sort_choices(t));
  return out;
}

std::string to_string(const LocalConfiguration& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LocalConfiguration& c) {
  os << "local {\n";
  for (const auto& [p, t] : c.bindings()) os << "  " << p << " = " << t << "\n";
  return os << "}";
}

std::ostream& operator<<(std::ostream& os, const CommAction& a) {
  return os << a.sender << "->" << a.receiver << ":" << a.payload;
}

std::string to_string(const CommAction& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

// ---------------------------------------------------------------------------
// Transitions

std::vector<Participant> active_participants(const LocalConfiguration& c) {
  std::vector<Participant> out;
  for (const auto& [p, t] : c.bindings())
    if (!is_inert(t)) out.push_back(p);
  return out;
}

std::optional<LocalConfiguration> comm_step(const LocalConfiguration& c, const CommAction& a) {
  if (a.sender == a.receiver) return std::nullopt;
  const auto* ts = c.find(a.sender);
  const auto* tr = c.find(a.receiver);
  if (!ts || !tr) return std::nullopt;
  auto s = local_step(*ts, Action{Direction::Send, a.receiver, a.payload});
  if (s.empty()) return std::nullopt;
  auto r = local_step(*tr, Action{Direction::Receive, a.sender, a.payload});
  if (r.empty()) return std::nullopt;
  LocalConfiguration out = c;
  out.rebind(a.sender, s.front());
  out.rebind(a.receiver, r.front());
  return out;
}

std::vector<std::pair<CommAction, LocalConfiguration>> successors(const LocalConfiguration& c) {
  std::vector<std::pair<CommAction, LocalConfiguration>> out;
  for (const auto& [p, t] : c.bindings()) {
    for (const auto& [act, cont] : transitions(t)) {
      if (act.direction != Direction::Send || act.peer == p) continue;
      const auto* tq = c.find(act.peer);
      if (!tq) continue;
      for (const auto& rcont : local_step(*tq, Action{Direction::Receive, p, act.payload})) {
        LocalConfiguration next = c;
        next.rebind(p, cont);
        next.rebind(act.peer, rcont);
        out.emplace_back(CommAction{p, act.peer, act.payload}, std::move(next));
      }
    }
  }
  return out;
}

std::vector<CommAction> enabled(const LocalConfiguration& c) {
  std::vector<CommAction> out;
  for (auto& [a, next] : successors(c))
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    case Verdict::BudgetExceeded:
      return "budget_exceeded";
  }
  return "?";
}

std::vector<CommAction> StateGraph::path_to(std::size_t state) const {
  std::vector<CommAction> path;
  while (state != 0) {
    path.push_back(*via[state]);
    state = parent[state];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

StateGraph explore(const LocalConfiguration& c, std::size_t state_budget) {
  StateGraph g;
  std::unordered_map<LocalConfiguration, std::size_t> index;
  g.states.push_back(c);
  g.edges.emplace_back();
  g.parent.push_back(0);
  g.via.emplace_back();
  index.emplace(c, 0);
  if (state_budget == 0) {
    g.complete = false;
    return g;
  }
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    auto succ = successors(g.states[i]);
    for (auto& [a, next] : succ) {
      auto it = index.find(next);
      std::size_t j;
      if (it != index.end()) {
        j = it->second;
      } else {
        if (g.states.size() >= state_budget) {
          g.complete = false;
          g.expanded = i;
          return g;
        }
        j = g.states.size();
        index.emplace(next, j);
        g.states.push_back(std::move(next));
        g.edges.emplace_back();
        g.parent.push_back(i);
        g.via.emplace_back(a);
      }
      g.edges[i].emplace_back(a, j);
    }
  }
  g.expanded = g.states.size();
  return g;
}

CheckResult is_deadlock_free(const LocalConfiguration& c, std::size_t state_budget) {
  auto g = explore(c, state_budget);
  CheckResult r;
  r.states = g.states.size();
  // A stuck state found before the budget ran out is a definite answer.
  for (std::size_t i = 0; i < g.expanded; ++i) {
    if (g.edges[i].empty() && !active_participants(g.states[i]).empty()) {
      r.verdict = Verdict::False;
      r.trace = g.path_to(i);
      return r;
    }
  }
  r.verdict = g.complete ? Verdict::True : Verdict::BudgetExceeded;
  return r;
}

CheckResult is_live(const LocalConfiguration& c, std::size_t state_budget) {
  auto g = explore(c, state_budget);
  CheckResult r;
  r.states = g.states.size();
  if (!g.complete) {
    r.verdict = Verdict::BudgetExceeded;
    return r;
  }
  const std::size_t n = g.states.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : g.edges[i]) preds[e.second].push_back(i);

  for (const auto& p : c.domain()) {
    // States from which p can eventually take part in a synchronisation.
    std::vector<char> good(n, 0);
    std::deque<std::size_t> work;
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : g.edges[i])
        if (e.first.sender == p || e.first.receiver == p) {
          good[i] = 1;
          work.push_back(i);
          break;
        }
    while (!work.empty()) {
      auto i = work.front();
      work.pop_front();
      for (auto k : preds[i])
        if (!good[k]) {
          good[k] = 1;
          work.push_back(k);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (good[i] || is_inert(g.states[i].at(p))) continue;
      r.verdict = Verdict::False;
      r.trace = g.path_to(i);
      r.starving = p;
      return r;
    }
  }
  r.verdict = Verdict::True;
  return r;
}

// ---------------------------------------------------------------------------
// Composition

Diagnostic CompositionError::to_diagnostic(SourcePos pos) const {
  std::string msg = "composition failed (" + rule + " rule): " + message;
  if (!participants.empty()) {
    msg += " [";
    for (std::size_t i = 0; i < participants.size(); ++i) {
      if (i) msg += ", ";
      msg += participants[i].name();
    }
    msg += "]";
  }
  return make_error("composition", std::move(msg), pos);
}

namespace {

struct ComposeFailure {
  CompositionError error;
};

class Composer {
 public:
  std::size_t steps = 0;

  GlobalProtocol run(const LocalConfiguration& c) {
    ++steps;
    const auto& bs = c.bindings();

    // Message-pass and choice rules: first sender in declaration order with a
    // matching dual.
    for (const auto& [p, tp] : bs) {
      ++steps;
      if (tp.kind() == LocalProtocol::Kind::Prefix) {
        const auto& a = tp.action();
        if (a.direction != Direction::Send) continue;
        const auto* tq = c.find(a.peer);
        if (!tq || tq->kind() != LocalProtocol::Kind::Prefix) continue;
        const auto& b = tq->action();
        if (b.direction != Direction::Receive || b.peer != p || b.payload != a.payload) continue;
        LocalConfiguration next = c;
        next.rebind(p, tp.cont());
        next.rebind(a.peer, tq->cont());
        return GlobalProtocol::pass(p, a.peer, a.payload, run(next));
      }
      if (tp.kind() == LocalProtocol::Kind::Choice) {
        const auto& lead = tp.branches().front().action;
        if (lead.direction != Direction::Send) continue;
        const auto& q = lead.peer;
        const auto* tq = c.find(q);
        if (!tq || tq->kind() != LocalProtocol::Kind::Choice) continue;
        const auto& rlead = tq->branches().front().action;
        if (rlead.direction != Direction::Receive || rlead.peer != p) continue;
        if (tq->branches().size() != tp.branches().size()) continue;
        std::vector<const LocalProtocol*> rconts;
        for (const auto& sb : tp.branches()) {
          const LocalProtocol* match = nullptr;
          for (const auto& rb : tq->branches())
            if (rb.action.payload == sb.action.payload) match = &rb.cont;
          if (!match) break;
          rconts.push_back(match);
        }
        if (rconts.size() != tp.branches().size()) continue;
        std::vector<GlobalProtocol::Branch> gbs;
        for (std::size_t i = 0; i < rconts.size(); ++i) {
          LocalConfiguration next = c;
          next.rebind(p, tp.branches()[i].cont);
          next.rebind(q, *rconts[i]);
          gbs.push_back({tp.branches()[i].action.payload, run(next)});
        }
        return GlobalProtocol::choice(p, q, tp.enum_type(), std::move(gbs));
      }
    }

    // Recursion rule: every active role opens the same loop.
    std::optional<std::string> label;
    bool all_rec_or_end = true;
    bool any_rec = false;
    for (const auto& [p, t] : bs) {
      ++steps;
      if (t.is_end()) continue;
      if (t.kind() != LocalProtocol::Kind::Rec) {
        all_rec_or_end = false;
        break;
      }
      any_rec = true;
      if (!label) label = t.label();
      if (*label != t.label()) {
        throw_error("rec", "roles open loops with different labels '" + *label + "' and '" +
                               t.label() + "'",
                    c);
      }
    }
    if (all_rec_or_end && any_rec) {
      LocalConfiguration premise;
      for (const auto& [p, t] : bs)
        premise.bind(p, t.is_end() ? LocalProtocol::var(*label) : t.body());
      return GlobalProtocol::rec(*label, run(premise));
    }

    // End and variable rules.
    bool all_end = true;
    for (const auto& [p, t] : bs) all_end = all_end && t.is_end();
    if (all_end) return GlobalProtocol::end();

    std::optional<std::string> var;
    bool all_var = true;
    for (const auto& [p, t] : bs) {
      if (t.kind() != LocalProtocol::Kind::Var || (var && *var != t.label())) {
        all_var = false;
        break;
      }
      var = t.label();
    }
    if (all_var && var) return GlobalProtocol::var(*var);

    diagnose(c);
  }

 private:
  [[noreturn]] static void throw_error(std::string rule, std::string message,
                                       const LocalConfiguration& c,
                                       std::vector<Participant> who = {}) {
    throw ComposeFailure{CompositionError{std::move(rule), std::move(message), std::move(who), c}};
  }

  // No rule applies: explain the most specific reason.
  [[noreturn]] static void diagnose(const LocalConfiguration& c) {
    for (const auto& [p, t] : c.bindings()) {
      if (t.kind() != LocalProtocol::Kind::Prefix && t.kind() != LocalProtocol::Kind::Choice)
        continue;
      const Action& a = t.kind() == LocalProtocol::Kind::Prefix
                            ? t.action()
                            : t.branches().front().action;
      if (a.direction != Direction::Send) continue;
      const bool is_choice = t.kind() == LocalProtocol::Kind::Choice;
      const char* rule = is_choice ? "choice" : "pass";
      const auto* tq = c.find(a.peer);
      if (!tq)
        throw_error(rule, "'" + p.name() + "' sends to unbound participant '" + a.peer.name() + "'",
                    c, {p});
      std::ostringstream os;
      os << "no dual for " << p << " sending to " << a.peer << "; " << a.peer << " is at '"
         << *tq << "'";
      throw_error(rule, os.str(), c, {p, a.peer});
    }
    std::vector<Participant> active = active_participants(c);
    bool has_rec = false;
    bool has_other = false;
    for (const auto& [p, t] : c.bindings()) {
      if (t.kind() == LocalProtocol::Kind::Rec) has_rec = true;
      else if (!t.is_end()) has_other = true;
    }
    if (has_rec && has_other)
      throw_error("rec", "loop entered by some roles while others are still communicating", c,
                  active);
    throw_error("var", "roles neither all finished nor all at the same loop label", c, active);
  }
};

}  // namespace

Result<Composition, CompositionError> compose(const LocalConfiguration& c) {
  Composer k;
  try {
    auto g = k.run(c);
    return Composition{std::move(g), k.steps};
  } catch (ComposeFailure& f) {
    return std::move(f.error);
  } catch (const Error& e) {
    // A constructed global protocol violated its own invariants.
    return CompositionError{"construct", e.what(), {}, c};
  }
}

// ---------------------------------------------------------------------------
// Projection

Diagnostic ProjectionError::to_diagnostic(SourcePos pos) const {
  std::string msg = "projection failed: " + message;
  if (!participants.empty()) {
    msg += " [";
    for (std::size_t i = 0; i < participants.size(); ++i) {
      if (i) msg += ", ";
      msg += participants[i].name();
    }
    msg += "]";
  }
  return make_error("projection", std::move(msg), pos);
}

namespace {

struct ProjectFailure {
  ProjectionError error;
};

LocalProtocol project_role(const GlobalProtocol& g, const Participant& r) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
      return LocalProtocol::end();
    case GlobalProtocol::Kind::Var:
      return LocalProtocol::var(g.label());
    case GlobalProtocol::Kind::Pass: {
      auto cont = project_role(g.cont(), r);
      if (r == g.sender())
        return LocalProtocol::prefix(Action{Direction::Send, g.receiver(), g.payload()}, cont);
      if (r == g.receiver())
        return LocalProtocol::prefix(Action{Direction::Receive, g.sender(), g.payload()}, cont);
      return cont;
    }
    case GlobalProtocol::Kind::Choice: {
      std::vector<LocalProtocol> conts;
      for (const auto& b : g.branches()) conts.push_back(project_role(b.cont, r));
      const bool snd = r == g.sender();
      const bool rcv = r == g.receiver();
      if (snd || rcv) {
        std::vector<LocalProtocol::Branch> bs;
        for (std::size_t i = 0; i < conts.size(); ++i) {
          Action a{snd ? Direction::Send : Direction::Receive, snd ? g.receiver() : g.sender(),
                   g.branches()[i].label};
          bs.push_back({std::move(a), conts[i]});
        }
        return LocalProtocol::choice(g.enum_type(), std::move(bs));
      }
      for (std::size_t i = 1; i < conts.size(); ++i)
        if (!(conts[i] == conts[0])) {
          std::ostringstream os;
          os << "role " << r << " behaves differently across the branches of " << g.sender()
             << "->" << g.receiver() << ":" << g.enum_type() << " ('" << conts[0] << "' vs '"
             << conts[i] << "')";
          throw ProjectFailure{ProjectionError{os.str(), {r, g.sender(), g.receiver()}}};
        }
      return conts[0];
    }
    case GlobalProtocol::Kind::Rec: {
      auto body = project_role(g.body(), r);
      if (body.kind() == LocalProtocol::Kind::Var && body.label() == g.label())
        return LocalProtocol::end();
      return LocalProtocol::rec(g.label(), body);
    }
  }
  return LocalProtocol::end();
}

}  // namespace

Result<LocalConfiguration, ProjectionError> project(const GlobalProtocol& g,
                                                    const std::vector<Participant>& roles) {
  for (const auto& p : participants(g))
    if (std::find(roles.begin(), roles.end(), p) == roles.end())
      return ProjectionError{"participant '" + p.name() + "' is not among the roles", {p}};
  try {
    LocalConfiguration out;
    for (const auto& r : roles) out.bind(r, project_role(g, r));
    return out;
  } catch (ProjectFailure& f) {
    return std::move(f.error);
  } catch (const Error& e) {
    return ProjectionError{e.what(), {}};
  }
}

Result<LocalConfiguration, ProjectionError> project(const GlobalProtocol& g) {
  return project(g, participants(g));
}

}  // namespace icps
