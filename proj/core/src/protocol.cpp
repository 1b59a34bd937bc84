#include "icps/protocol.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace icps {

Participant::Participant(std::string name) : name_(std::move(name)) {
  if (!is_identifier(name_)) fail("bad-participant", "invalid participant name '" + name_ + "'");
}

MessageType::MessageType(std::string name) : name_(std::move(name)) {
  if (!is_simple_identifier(name_)) fail("bad-message-type", "invalid message type '" + name_ + "'");
}

Action send(std::string peer, std::string payload) {
  return Action{Direction::Send, Participant(std::move(peer)), MessageType(std::move(payload))};
}

Action receive(std::string peer, std::string payload) {
  return Action{Direction::Receive, Participant(std::move(peer)), MessageType(std::move(payload))};
}

std::ostream& operator<<(std::ostream& os, const Participant& p) { return os << p.name(); }
std::ostream& operator<<(std::ostream& os, const MessageType& m) { return os << m.name(); }
std::ostream& operator<<(std::ostream& os, const Action& a) {
  return os << a.peer << (a.direction == Direction::Send ? '!' : '?') << a.payload;
}

namespace detail {

struct LocalNode {
  LocalProtocol::Kind kind = LocalProtocol::Kind::End;
  std::optional<Action> action;
  std::optional<MessageType> enum_type;
  std::vector<LocalProtocol::Branch> branches;
  std::string label;
  // Prefix continuation or Rec body.
  std::optional<LocalProtocol> child;
  std::size_t hash = 0;
};

struct GlobalNode {
  GlobalProtocol::Kind kind = GlobalProtocol::Kind::End;
  std::optional<Participant> sender;
  std::optional<Participant> receiver;
  std::optional<MessageType> payload;  // Pass payload or Choice enum type
  std::vector<GlobalProtocol::Branch> branches;
  std::string label;
  std::optional<GlobalProtocol> child;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

using detail::GlobalNode;
using detail::LocalNode;

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

std::size_t hash_action(const Action& a) {
  std::size_t h = a.direction == Direction::Send ? 0x51 : 0x52;
  hash_combine(h, hash_str(a.peer.name()));
  hash_combine(h, hash_str(a.payload.name()));
  return h;
}

const std::shared_ptr<const LocalNode>& local_end_node() {
  static const std::shared_ptr<const LocalNode> node = [] {
    auto n = std::make_shared<LocalNode>();
    n->kind = LocalProtocol::Kind::End;
    n->hash = 0xe4d;
    return n;
  }();
  return node;
}

const std::shared_ptr<const GlobalNode>& global_end_node() {
  static const std::shared_ptr<const GlobalNode> node = [] {
    auto n = std::make_shared<GlobalNode>();
    n->kind = GlobalProtocol::Kind::End;
    n->hash = 0x9e4d;
    return n;
  }();
  return node;
}

[[noreturn]] void wrong_kind(const char* what) {
  throw std::logic_error(std::string("protocol accessor used on wrong kind: ") + what);
}

void check_label(const std::string& label) {
  if (!is_simple_identifier(label)) fail("bad-label", "invalid recursion label '" + label + "'");
  if (label == "end" || label == "or") fail("bad-label", "'" + label + "' is reserved");
}

// Labels reachable from the root without crossing an action.
std::set<std::string> unguarded_labels(const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::Var:
      return {p.label()};
    case LocalProtocol::Kind::Rec: {
      auto inner = unguarded_labels(p.body());
      inner.erase(p.label());
      return inner;
    }
    default:
      return {};
  }
}

std::set<std::string> unguarded_labels(const GlobalProtocol& g) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::Var:
      return {g.label()};
    case GlobalProtocol::Kind::Rec: {
      auto inner = unguarded_labels(g.body());
      inner.erase(g.label());
      return inner;
    }
    default:
      return {};
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalProtocol

LocalProtocol::LocalProtocol() : node_(local_end_node()) {}

LocalProtocol LocalProtocol::end() { return LocalProtocol(); }

LocalProtocol LocalProtocol::prefix(Action action, LocalProtocol cont) {
  auto n = std::make_shared<LocalNode>();
  n->kind = Kind::Prefix;
  n->hash = 0x11;
  hash_combine(n->hash, hash_action(action));
  hash_combine(n->hash, cont.hash());
  n->action = std::move(action);
  n->child = std::move(cont);
  return LocalProtocol(std::move(n));
}

LocalProtocol LocalProtocol::choice(MessageType enum_type, std::vector<Branch> branches) {
  if (branches.size() < 2) fail("bad-choice", "a choice needs at least two branches");
  const auto& first = branches.front().action;
  std::set<MessageType> seen;
  for (const auto& b : branches) {
    if (b.action.peer != first.peer || b.action.direction != first.direction)
      fail("bad-choice", "choice branches must share peer and direction");
    if (!seen.insert(b.action.payload).second)
      fail("bad-choice", "duplicate choice label '" + b.action.payload.name() + "'");
  }
  auto n = std::make_shared<LocalNode>();
  n->kind = Kind::Choice;
  n->hash = 0x22;
  hash_combine(n->hash, hash_str(enum_type.name()));
  for (const auto& b : branches) {
    hash_combine(n->hash, hash_action(b.action));
    hash_combine(n->hash, b.cont.hash());
  }
  n->enum_type = std::move(enum_type);
  n->branches = std::move(branches);
  return LocalProtocol(std::move(n));
}

LocalProtocol LocalProtocol::rec(std::string label, LocalProtocol body) {
  check_label(label);
  if (unguarded_labels(body).count(label))
    fail("unguarded-recursion", "recursion on '" + label + "' is not guarded by an action");
  auto n = std::make_shared<LocalNode>();
  n->kind = Kind::Rec;
  n->hash = 0x33;
  hash_combine(n->hash, hash_str(label));
  hash_combine(n->hash, body.hash());
  n->label = std::move(label);
  n->child = std::move(body);
  return LocalProtocol(std::move(n));
}

LocalProtocol LocalProtocol::var(std::string label) {
  check_label(label);
  auto n = std::make_shared<LocalNode>();
  n->kind = Kind::Var;
  n->hash = 0x44;
  hash_combine(n->hash, hash_str(label));
  n->label = std::move(label);
  return LocalProtocol(std::move(n));
}

LocalProtocol::Kind LocalProtocol::kind() const { return node_->kind; }

const Action& LocalProtocol::action() const {
  if (kind() != Kind::Prefix) wrong_kind("action");
  return *node_->action;
}
const LocalProtocol& LocalProtocol::cont() const {
  if (kind() != Kind::Prefix) wrong_kind("cont");
  return *node_->child;
}
const MessageType& LocalProtocol::enum_type() const {
  if (kind() != Kind::Choice) wrong_kind("enum_type");
  return *node_->enum_type;
}
const std::vector<LocalProtocol::Branch>& LocalProtocol::branches() const {
  if (kind() != Kind::Choice) wrong_kind("branches");
  return node_->branches;
}
const std::string& LocalProtocol::label() const {
  if (kind() != Kind::Rec && kind() != Kind::Var) wrong_kind("label");
  return node_->label;
}
const LocalProtocol& LocalProtocol::body() const {
  if (kind() != Kind::Rec) wrong_kind("body");
  return *node_->child;
}

std::size_t LocalProtocol::hash() const { return node_->hash; }

bool operator==(const LocalProtocol& a, const LocalProtocol& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LocalProtocol::Kind::End:
      return true;
    case LocalProtocol::Kind::Var:
      return a.label() == b.label();
    case LocalProtocol::Kind::Rec:
      return a.label() == b.label() && a.body() == b.body();
    case LocalProtocol::Kind::Prefix:
      return a.action() == b.action() && a.cont() == b.cont();
    case LocalProtocol::Kind::Choice: {
      if (a.enum_type() != b.enum_type()) return false;
      const auto& x = a.branches();
      const auto& y = b.branches();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].action != y[i].action || !(x[i].cont == y[i].cont)) return false;
      return true;
    }
  }
  return false;
}

std::set<Participant> participants(const LocalProtocol& p) {
  std::set<Participant> out;
  std::function<void(const LocalProtocol&)> walk = [&](const LocalProtocol& q) {
    switch (q.kind()) {
      case LocalProtocol::Kind::End:
      case LocalProtocol::Kind::Var:
        return;
      case LocalProtocol::Kind::Prefix:
        out.insert(q.action().peer);
        walk(q.cont());
        return;
      case LocalProtocol::Kind::Choice:
        for (const auto& b : q.branches()) {
          out.insert(b.action.peer);
          walk(b.cont);
        }
        return;
      case LocalProtocol::Kind::Rec:
        walk(q.body());
        return;
    }
  };
  walk(p);
  return out;
}

std::size_t size(const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      return 1;
    case LocalProtocol::Kind::Prefix:
      return 1 + size(p.cont());
    case LocalProtocol::Kind::Choice: {
      // A choice is the sum of its summands, each an action prefix.
      std::size_t total = 0;
      for (const auto& b : p.branches()) total += 1 + size(b.cont);
      return total;
    }
    case LocalProtocol::Kind::Rec:
      return size(p.body());
  }
  return 1;
}

LocalProtocol substitute(const LocalProtocol& target, const LocalProtocol& replacement,
                         const std::string& label) {
  switch (target.kind()) {
    case LocalProtocol::Kind::End:
      return target;
    case LocalProtocol::Kind::Var:
      return target.label() == label ? replacement : target;
    case LocalProtocol::Kind::Prefix: {
      auto c = substitute(target.cont(), replacement, label);
      if (c.identity() == target.cont().identity()) return target;
      return LocalProtocol::prefix(target.action(), std::move(c));
    }
    case LocalProtocol::Kind::Choice: {
      std::vector<LocalProtocol::Branch> bs;
      bs.reserve(target.branches().size());
      for (const auto& b : target.branches())
        bs.push_back({b.action, substitute(b.cont, replacement, label)});
      return LocalProtocol::choice(target.enum_type(), std::move(bs));
    }
    case LocalProtocol::Kind::Rec:
      if (target.label() == label) return target;
      return LocalProtocol::rec(target.label(), substitute(target.body(), replacement, label));
  }
  return target;
}

std::vector<std::pair<Action, LocalProtocol>> transitions(const LocalProtocol& p) {
  std::vector<std::pair<Action, LocalProtocol>> out;
  auto add = [&](const Action& a, const LocalProtocol& c) {
    for (const auto& [a2, c2] : out)
      if (a2 == a && c2 == c) return;
    out.emplace_back(a, c);
  };
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      break;
    case LocalProtocol::Kind::Prefix:
      add(p.action(), p.cont());
      break;
    case LocalProtocol::Kind::Choice:
      for (const auto& b : p.branches()) add(b.action, b.cont);
      break;
    case LocalProtocol::Kind::Rec:
      for (const auto& [a, c] : transitions(substitute(p.body(), p, p.label()))) add(a, c);
      break;
  }
  return out;
}

std::vector<LocalProtocol> local_step(const LocalProtocol& p, const Action& a) {
  std::vector<LocalProtocol> out;
  for (auto& [act, cont] : transitions(p))
    if (act == a) out.push_back(std::move(cont));
  return out;
}

bool is_inert(const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::Prefix:
    case LocalProtocol::Kind::Choice:
      return false;
    case LocalProtocol::Kind::Rec:
      return is_inert(p.body());
    default:
      return true;
  }
}

std::set<std::string> free_labels(const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
      return {};
    case LocalProtocol::Kind::Var:
      return {p.label()};
    case LocalProtocol::Kind::Prefix:
      return free_labels(p.cont());
    case LocalProtocol::Kind::Choice: {
      std::set<std::string> out;
      for (const auto& b : p.branches()) out.merge(free_labels(b.cont));
      return out;
    }
    case LocalProtocol::Kind::Rec: {
      auto out = free_labels(p.body());
      out.erase(p.label());
      return out;
    }
  }
  return {};
}

void check_closed(const LocalProtocol& p) {
  auto fl = free_labels(p);
  if (!fl.empty()) fail("unbound-label", "recursion label '" + *fl.begin() + "' is not bound");
}

LocalProtocol rename_participants(const LocalProtocol& p,
                                  const std::map<std::string, std::string>& mapping) {
  auto ren = [&](const Action& a) {
    auto it = mapping.find(a.peer.name());
    if (it == mapping.end()) return a;
    return Action{a.direction, Participant(it->second), a.payload};
  };
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      return p;
    case LocalProtocol::Kind::Prefix:
      return LocalProtocol::prefix(ren(p.action()), rename_participants(p.cont(), mapping));
    case LocalProtocol::Kind::Choice: {
      std::vector<LocalProtocol::Branch> bs;
      for (const auto& b : p.branches())
        bs.push_back({ren(b.action), rename_participants(b.cont, mapping)});
      return LocalProtocol::choice(p.enum_type(), std::move(bs));
    }
    case LocalProtocol::Kind::Rec:
      return LocalProtocol::rec(p.label(), rename_participants(p.body(), mapping));
  }
  return p;
}

LocalProtocol sort_choices(const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      return p;
    case LocalProtocol::Kind::Prefix:
      return LocalProtocol::prefix(p.action(), sort_choices(p.cont()));
    case LocalProtocol::Kind::Choice: {
      std::vector<LocalProtocol::Branch> bs;
      for (const auto& b : p.branches()) bs.push_back({b.action, sort_choices(b.cont)});
      std::sort(bs.begin(), bs.end(),
                [](const auto& x, const auto& y) { return x.action.payload < y.action.payload; });
      return LocalProtocol::choice(p.enum_type(), std::move(bs));
    }
    case LocalProtocol::Kind::Rec:
      return LocalProtocol::rec(p.label(), sort_choices(p.body()));
  }
  return p;
}

namespace {

void print(std::ostream& os, const LocalProtocol& p) {
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
      os << "end";
      return;
    case LocalProtocol::Kind::Var:
      os << p.label();
      return;
    case LocalProtocol::Kind::Rec:
      os << p.label() << ". ";
      print(os, p.body());
      return;
    case LocalProtocol::Kind::Prefix:
      os << p.action() << ". ";
      print(os, p.cont());
      return;
    case LocalProtocol::Kind::Choice: {
      const auto& first = p.branches().front().action;
      os << first.peer << (first.direction == Direction::Send ? '!' : '?') << p.enum_type();
      bool lead = true;
      for (const auto& b : p.branches()) {
        os << (lead ? " { " : " or { ") << b.action.payload << ": ";
        print(os, b.cont);
        os << " }";
        lead = false;
      }
      return;
    }
  }
}

void print(std::ostream& os, const GlobalProtocol& g) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
      os << "end";
      return;
    case GlobalProtocol::Kind::Var:
      os << g.label();
      return;
    case GlobalProtocol::Kind::Rec:
      os << g.label() << ". ";
      print(os, g.body());
      return;
    case GlobalProtocol::Kind::Pass:
      os << g.sender() << "->" << g.receiver() << ":" << g.payload() << ". ";
      print(os, g.cont());
      return;
    case GlobalProtocol::Kind::Choice: {
      os << g.sender() << "->" << g.receiver() << ":" << g.enum_type();
      bool lead = true;
      for (const auto& b : g.branches()) {
        os << (lead ? " { " : " or { ") << b.label << ": ";
        print(os, b.cont);
        os << " }";
        lead = false;
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const LocalProtocol& p) {
  std::ostringstream os;
  print(os, p);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LocalProtocol& p) {
  print(os, p);
  return os;
}

// ---------------------------------------------------------------------------
// GlobalProtocol

GlobalProtocol::GlobalProtocol() : node_(global_end_node()) {}

GlobalProtocol GlobalProtocol::end() { return GlobalProtocol(); }

GlobalProtocol GlobalProtocol::pass(Participant sender, Participant receiver, MessageType payload,
                                    GlobalProtocol cont) {
  if (sender == receiver)
    fail("self-message", "participant '" + sender.name() + "' cannot message itself");
  auto n = std::make_shared<GlobalNode>();
  n->kind = Kind::Pass;
  n->hash = 0x55;
  hash_combine(n->hash, hash_str(sender.name()));
  hash_combine(n->hash, hash_str(receiver.name()));
  hash_combine(n->hash, hash_str(payload.name()));
  hash_combine(n->hash, cont.hash());
  n->sender = std::move(sender);
  n->receiver = std::move(receiver);
  n->payload = std::move(payload);
  n->child = std::move(cont);
  return GlobalProtocol(std::move(n));
}

GlobalProtocol GlobalProtocol::choice(Participant sender, Participant receiver,
                                      MessageType enum_type, std::vector<Branch> branches) {
  if (sender == receiver)
    fail("self-message", "participant '" + sender.name() + "' cannot message itself");
  if (branches.size() < 2) fail("bad-choice", "a choice needs at least two branches");
  std::set<MessageType> seen;
  for (const auto& b : branches)
    if (!seen.insert(b.label).second)
      fail("bad-choice", "duplicate choice label '" + b.label.name() + "'");
  auto n = std::make_shared<GlobalNode>();
  n->kind = Kind::Choice;
  n->hash = 0x66;
  hash_combine(n->hash, hash_str(sender.name()));
  hash_combine(n->hash, hash_str(receiver.name()));
  hash_combine(n->hash, hash_str(enum_type.name()));
  for (const auto& b : branches) {
    hash_combine(n->hash, hash_str(b.label.name()));
    hash_combine(n->hash, b.cont.hash());
  }
  n->sender = std::move(sender);
  n->receiver = std::move(receiver);
  n->payload = std::move(enum_type);
  n->branches = std::move(branches);
  return GlobalProtocol(std::move(n));
}

GlobalProtocol GlobalProtocol::rec(std::string label, GlobalProtocol body) {
  check_label(label);
  if (unguarded_labels(body).count(label))
    fail("unguarded-recursion", "recursion on '" + label + "' is not guarded by a message");
  auto n = std::make_shared<GlobalNode>();
  n->kind = Kind::Rec;
  n->hash = 0x77;
  hash_combine(n->hash, hash_str(label));
  hash_combine(n->hash, body.hash());
  n->label = std::move(label);
  n->child = std::move(body);
  return GlobalProtocol(std::move(n));
}

GlobalProtocol GlobalProtocol::var(std::string label) {
  check_label(label);
  auto n = std::make_shared<GlobalNode>();
  n->kind = Kind::Var;
  n->hash = 0x88;
  hash_combine(n->hash, hash_str(label));
  n->label = std::move(label);
  return GlobalProtocol(std::move(n));
}

GlobalProtocol::Kind GlobalProtocol::kind() const { return node_->kind; }

const Participant& GlobalProtocol::sender() const {
  if (kind() != Kind::Pass && kind() != Kind::Choice) wrong_kind("sender");
  return *node_->sender;
}
const Participant& GlobalProtocol::receiver() const {
  if (kind() != Kind::Pass && kind() != Kind::Choice) wrong_kind("receiver");
  return *node_->receiver;
}
const MessageType& GlobalProtocol::payload() const {
  if (kind() != Kind::Pass) wrong_kind("payload");
  return *node_->payload;
}
const GlobalProtocol& GlobalProtocol::cont() const {
  if (kind() != Kind::Pass) wrong_kind("cont");
  return *node_->child;
}
const MessageType& GlobalProtocol::enum_type() const {
  if (kind() != Kind::Choice) wrong_kind("enum_type");
  return *node_->payload;
}
const std::vector<GlobalProtocol::Branch>& GlobalProtocol::branches() const {
  if (kind() != Kind::Choice) wrong_kind("branches");
  return node_->branches;
}
const std::string& GlobalProtocol::label() const {
  if (kind() != Kind::Rec && kind() != Kind::Var) wrong_kind("label");
  return node_->label;
}
const GlobalProtocol& GlobalProtocol::body() const {
  if (kind() != Kind::Rec) wrong_kind("body");
  return *node_->child;
}

std::size_t GlobalProtocol::hash() const { return node_->hash; }

bool operator==(const GlobalProtocol& a, const GlobalProtocol& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case GlobalProtocol::Kind::End:
      return true;
    case GlobalProtocol::Kind::Var:
      return a.label() == b.label();
    case GlobalProtocol::Kind::Rec:
      return a.label() == b.label() && a.body() == b.body();
    case GlobalProtocol::Kind::Pass:
      return a.sender() == b.sender() && a.receiver() == b.receiver() &&
             a.payload() == b.payload() && a.cont() == b.cont();
    case GlobalProtocol::Kind::Choice: {
      if (a.sender() != b.sender() || a.receiver() != b.receiver() ||
          a.enum_type() != b.enum_type())
        return false;
      const auto& x = a.branches();
      const auto& y = b.branches();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].label != y[i].label || !(x[i].cont == y[i].cont)) return false;
      return true;
    }
  }
  return false;
}

std::vector<Participant> participants(const GlobalProtocol& g) {
  std::vector<Participant> out;
  auto add = [&](const Participant& p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  std::function<void(const GlobalProtocol&)> walk = [&](const GlobalProtocol& h) {
    switch (h.kind()) {
      case GlobalProtocol::Kind::End:
      case GlobalProtocol::Kind::Var:
        return;
      case GlobalProtocol::Kind::Pass:
        add(h.sender());
        add(h.receiver());
        walk(h.cont());
        return;
      case GlobalProtocol::Kind::Choice:
        add(h.sender());
        add(h.receiver());
        for (const auto& b : h.branches()) walk(b.cont);
        return;
      case GlobalProtocol::Kind::Rec:
        walk(h.body());
        return;
    }
  };
  walk(g);
  return out;
}

std::size_t size(const GlobalProtocol& g) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
    case GlobalProtocol::Kind::Var:
      return 1;
    case GlobalProtocol::Kind::Pass:
      return 1 + size(g.cont());
    case GlobalProtocol::Kind::Choice: {
      std::size_t total = 0;
      for (const auto& b : g.branches()) total += 1 + size(b.cont);
      return total;
    }
    case GlobalProtocol::Kind::Rec:
      return size(g.body());
  }
  return 1;
}

std::set<std::string> free_labels(const GlobalProtocol& g) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
      return {};
    case GlobalProtocol::Kind::Var:
      return {g.label()};
    case GlobalProtocol::Kind::Pass:
      return free_labels(g.cont());
    case GlobalProtocol::Kind::Choice: {
      std::set<std::string> out;
      for (const auto& b : g.branches()) out.merge(free_labels(b.cont));
      return out;
    }
    case GlobalProtocol::Kind::Rec: {
      auto out = free_labels(g.body());
      out.erase(g.label());
      return out;
    }
  }
  return {};
}

void check_closed(const GlobalProtocol& g) {
  auto fl = free_labels(g);
  if (!fl.empty()) fail("unbound-label", "recursion label '" + *fl.begin() + "' is not bound");
}

GlobalProtocol rename_participants(const GlobalProtocol& g,
                                   const std::map<std::string, std::string>& mapping) {
  auto ren = [&](const Participant& p) {
    auto it = mapping.find(p.name());
    return it == mapping.end() ? p : Participant(it->second);
  };
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
    case GlobalProtocol::Kind::Var:
      return g;
    case GlobalProtocol::Kind::Pass:
      return GlobalProtocol::pass(ren(g.sender()), ren(g.receiver()), g.payload(),
                                  rename_participants(g.cont(), mapping));
    case GlobalProtocol::Kind::Choice: {
      std::vector<GlobalProtocol::Branch> bs;
      for (const auto& b : g.branches()) bs.push_back({b.label, rename_participants(b.cont, mapping)});
      return GlobalProtocol::choice(ren(g.sender()), ren(g.receiver()), g.enum_type(), std::move(bs));
    }
    case GlobalProtocol::Kind::Rec:
      return GlobalProtocol::rec(g.label(), rename_participants(g.body(), mapping));
  }
  return g;
}

GlobalProtocol sort_choices(const GlobalProtocol& g) {
  switch (g.kind()) {
    case GlobalProtocol::Kind::End:
    case GlobalProtocol::Kind::Var:
      return g;
    case GlobalProtocol::Kind::Pass:
      return GlobalProtocol::pass(g.sender(), g.receiver(), g.payload(), sort_choices(g.cont()));
    case GlobalProtocol::Kind::Choice: {
      std::vector<GlobalProtocol::Branch> bs;
      for (const auto& b : g.branches()) bs.push_back({b.label, sort_choices(b.cont)});
      std::sort(bs.begin(), bs.end(), [](const auto& x, const auto& y) { return x.label < y.label; });
      return GlobalProtocol::choice(g.sender(), g.receiver(), g.enum_type(), std::move(bs));
    }
    case GlobalProtocol::Kind::Rec:
      return GlobalProtocol::rec(g.label(), sort_choices(g.body()));
  }
  return g;
}

std::string to_string(const GlobalProtocol& g) {
  std::ostringstream os;
  print(os, g);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const GlobalProtocol& g) {
  print(os, g);
  return os;
}

}  // namespace icps
