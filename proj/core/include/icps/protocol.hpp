#pragma once

// Behavioural types: local protocols (one agent's view) and global protocols
// (the choreography), together with their purely syntactic operations.
//
// Both ASTs are immutable, hash-consed-by-value trees held through
// shared_ptr<const>, so copies are cheap and values can be shared freely
// across threads.

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "icps/common.hpp"

namespace icps {

/// An interacting agent; dot-qualified names such as `t.tank_mass` are allowed.
class Participant {
 public:
  explicit Participant(std::string name);

  const std::string& name() const { return name_; }
  auto operator<=>(const Participant&) const = default;

 private:
  std::string name_;
};

/// Payload type of an action: a property name (`flow`) or an enumeration label (`ON`).
class MessageType {
 public:
  explicit MessageType(std::string name);

  const std::string& name() const { return name_; }
  auto operator<=>(const MessageType&) const = default;

 private:
  std::string name_;
};

enum class Direction { Send, Receive };

struct Action {
  Direction direction;
  Participant peer;
  MessageType payload;

  auto operator<=>(const Action&) const = default;
};

Action send(std::string peer, std::string payload);
Action receive(std::string peer, std::string payload);

std::ostream& operator<<(std::ostream& os, const Participant& p);
std::ostream& operator<<(std::ostream& os, const MessageType& m);
std::ostream& operator<<(std::ostream& os, const Action& a);

// ---------------------------------------------------------------------------
// Local protocols

class LocalProtocol;
struct LocalBranch;
class GlobalProtocol;
struct GlobalBranch;

namespace detail {
struct LocalNode;
struct GlobalNode;
}  // namespace detail

class LocalProtocol {
 public:
  enum class Kind { End, Prefix, Choice, Rec, Var };

  using Branch = LocalBranch;

  /// The inactive protocol.
  LocalProtocol();

  static LocalProtocol end();
  static LocalProtocol prefix(Action action, LocalProtocol cont);
  /// Choice over one enumeration. All branches must share peer and
  /// direction and carry pairwise-distinct payloads; at least two branches.
  static LocalProtocol choice(MessageType enum_type, std::vector<Branch> branches);
  /// Rejects unguarded bodies such as `t. t`.
  static LocalProtocol rec(std::string label, LocalProtocol body);
  static LocalProtocol var(std::string label);

  Kind kind() const;
  bool is_end() const { return kind() == Kind::End; }
  bool is_var() const { return kind() == Kind::Var; }

  // Accessors; each throws std::logic_error on the wrong kind.
  const Action& action() const;            // Prefix
  const LocalProtocol& cont() const;       // Prefix
  const MessageType& enum_type() const;    // Choice
  const std::vector<Branch>& branches() const;  // Choice
  const std::string& label() const;        // Rec, Var
  const LocalProtocol& body() const;       // Rec

  std::size_t hash() const;
  friend bool operator==(const LocalProtocol& a, const LocalProtocol& b);

  const void* identity() const { return node_.get(); }

 private:
  explicit LocalProtocol(std::shared_ptr<const detail::LocalNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::LocalNode> node_;
};

struct LocalBranch {
  Action action;
  LocalProtocol cont;
};

std::set<Participant> participants(const LocalProtocol& p);
std::size_t size(const LocalProtocol& p);

/// Replaces free occurrences of `label` in `target` by `replacement`.
/// A nested binder with the same label shadows it.
LocalProtocol substitute(const LocalProtocol& target, const LocalProtocol& replacement,
                         const std::string& label);

/// All (action, continuation) pairs observable in one step, unfolding
/// recursion as needed. Order follows the syntax; duplicates removed.
std::vector<std::pair<Action, LocalProtocol>> transitions(const LocalProtocol& p);

/// Continuations reachable by observing `a` once.
std::vector<LocalProtocol> local_step(const LocalProtocol& p, const Action& a);

/// Labels that occur free (unbound by an enclosing binder).
std::set<std::string> free_labels(const LocalProtocol& p);
/// True when no action is ever reachable, e.g. `end` or `t. s. end`.
bool is_inert(const LocalProtocol& p);

/// Throws icps::Error unless every label is bound.
void check_closed(const LocalProtocol& p);

/// Renames peers through `mapping`; peers not in the map stay unchanged.
LocalProtocol rename_participants(const LocalProtocol& p,
                                  const std::map<std::string, std::string>& mapping);

/// Sorts choice branches by payload, recursively. Used to compare protocols
/// for which branch order carries no meaning.
LocalProtocol sort_choices(const LocalProtocol& p);

/// Surface syntax, e.g. `loop. s1?flow. controller!head. loop`.
std::string to_string(const LocalProtocol& p);
std::ostream& operator<<(std::ostream& os, const LocalProtocol& p);

// ---------------------------------------------------------------------------
// Global protocols

class GlobalProtocol {
 public:
  enum class Kind { End, Pass, Choice, Rec, Var };

  using Branch = GlobalBranch;

  GlobalProtocol();

  static GlobalProtocol end();
  static GlobalProtocol pass(Participant sender, Participant receiver, MessageType payload,
                             GlobalProtocol cont);
  static GlobalProtocol choice(Participant sender, Participant receiver, MessageType enum_type,
                               std::vector<Branch> branches);
  static GlobalProtocol rec(std::string label, GlobalProtocol body);
  static GlobalProtocol var(std::string label);

  Kind kind() const;
  bool is_end() const { return kind() == Kind::End; }

  const Participant& sender() const;      // Pass, Choice
  const Participant& receiver() const;    // Pass, Choice
  const MessageType& payload() const;     // Pass
  const GlobalProtocol& cont() const;     // Pass
  const MessageType& enum_type() const;   // Choice
  const std::vector<Branch>& branches() const;  // Choice
  const std::string& label() const;       // Rec, Var
  const GlobalProtocol& body() const;     // Rec

  std::size_t hash() const;
  friend bool operator==(const GlobalProtocol& a, const GlobalProtocol& b);

 private:
  explicit GlobalProtocol(std::shared_ptr<const detail::GlobalNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::GlobalNode> node_;
};

struct GlobalBranch {
  MessageType label;
  GlobalProtocol cont;
};

/// Sender/receiver names in order of first appearance.
std::vector<Participant> participants(const GlobalProtocol& g);
std::size_t size(const GlobalProtocol& g);
std::set<std::string> free_labels(const GlobalProtocol& g);
void check_closed(const GlobalProtocol& g);
GlobalProtocol rename_participants(const GlobalProtocol& g,
                                   const std::map<std::string, std::string>& mapping);
GlobalProtocol sort_choices(const GlobalProtocol& g);

std::string to_string(const GlobalProtocol& g);
std::ostream& operator<<(std::ostream& os, const GlobalProtocol& g);

}  // namespace icps

template <>
struct std::hash<icps::LocalProtocol> {
  std::size_t operator()(const icps::LocalProtocol& p) const noexcept { return p.hash(); }
};
template <>
struct std::hash<icps::GlobalProtocol> {
  std::size_t operator()(const icps::GlobalProtocol& g) const noexcept { return g.hash(); }
};
