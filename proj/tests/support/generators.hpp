#pragma once

// Random protocols and configurations for property tests.

#include <random>
#include <string>
#include <vector>

#include "icps/protocol.hpp"
#include "icps/session.hpp"

namespace icps::testing {

struct GenOptions {
  int max_depth = 8;
  int participants = 5;
};

/// Global protocols in which a single token travels: every message is sent
/// by whoever received the previous one. Such a protocol has exactly one
/// derivation under the deterministic composition strategy, so it is already
/// in the form compose() produces. Unprojectable ones are possible; callers
/// filter them with project().
class GlobalGen {
 public:
  GlobalGen(std::uint64_t seed, GenOptions o = {}) : rng_(seed), opt_(o) {}

  /// Never a protocol without messages: `t1. end` has no roles to carry it.
  GlobalProtocol next() {
    for (;;) {
      labels_ = 0;
      auto g = gen(opt_.max_depth, 0, {});
      if (!participants(g).empty()) return g;
    }
  }

 private:
  struct Scope {
    std::string label;
    bool guarded;
  };

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Participant role(int i) { return Participant("p" + std::to_string(i + 1)); }
  int other(int holder) {
    int r = pick(opt_.participants - 1);
    return r >= holder ? r + 1 : r;
  }

  GlobalProtocol gen(int depth, int holder, std::vector<Scope> scope) {
    std::vector<const Scope*> targets;
    for (const auto& s : scope)
      if (s.guarded) targets.push_back(&s);
    if (depth <= 1) {
      if (!targets.empty() && pick(3) != 0) return GlobalProtocol::var(targets[pick(targets.size())]->label);
      return GlobalProtocol::end();
    }
    int choice = pick(10);
    if (choice == 0) return GlobalProtocol::end();
    if (choice == 1 && !targets.empty()) return GlobalProtocol::var(targets[pick(targets.size())]->label);
    if (choice <= 3) {
      auto t = "t" + std::to_string(++labels_);
      scope.push_back(Scope{t, false});
      return GlobalProtocol::rec(t, gen(depth - 1, holder, scope));
    }
    for (auto& s : scope) s.guarded = true;
    int to = other(holder);
    if (choice <= 7) {
      static const char* payloads[] = {"flow", "head", "nat"};
      return GlobalProtocol::pass(role(holder), role(to), MessageType(payloads[pick(3)]),
                                  gen(depth - 1, to, scope));
    }
    static const char* labels[] = {"ON", "OFF", "HOLD"};
    int n = 2 + pick(2);
    std::vector<GlobalProtocol::Branch> bs;
    // a shared continuation keeps bystanders projectable
    const bool shared = pick(2) == 0;
    for (int i = 0; i < n; ++i)
      bs.push_back({MessageType(labels[i]), shared && i > 0 ? bs[0].cont : gen(depth - 1, to, scope)});
    return GlobalProtocol::choice(role(holder), role(to), MessageType("signal"), std::move(bs));
  }

  std::mt19937_64 rng_;
  GenOptions opt_;
  int labels_ = 0;
};

/// Arbitrary local configurations over p1..pn; most are neither live nor
/// deadlock-free, some are both.
class LocalGen {
 public:
  LocalGen(std::uint64_t seed, int participants = 3, int max_depth = 4)
      : rng_(seed), n_(participants), depth_(max_depth) {}

  LocalConfiguration next() {
    LocalConfiguration c;
    for (int i = 0; i < n_; ++i) c.bind(Participant("p" + std::to_string(i + 1)), gen(i, depth_, false));
    return c;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Action action(int self) {
    int peer = pick(n_ - 1);
    if (peer >= self) ++peer;
    static const char* payloads[] = {"a", "b"};
    auto dir = pick(2) ? Direction::Send : Direction::Receive;
    return Action{dir, Participant("p" + std::to_string(peer + 1)), MessageType(payloads[pick(2)])};
  }

  // `in_loop`: a guarded `t` is in scope.
  LocalProtocol gen(int self, int depth, bool in_loop) {
    if (depth <= 0) return in_loop && pick(2) ? LocalProtocol::var("t") : LocalProtocol::end();
    int k = pick(8);
    if (k == 0) return LocalProtocol::end();
    if (k == 1 && !in_loop && depth > 1) {
      auto a = action(self);
      return LocalProtocol::rec("t", LocalProtocol::prefix(a, gen(self, depth - 1, true)));
    }
    if (k == 2) {
      auto a = action(self);
      std::vector<LocalProtocol::Branch> bs;
      bs.push_back({Action{a.direction, a.peer, MessageType("ON")}, gen(self, depth - 1, in_loop)});
      bs.push_back({Action{a.direction, a.peer, MessageType("OFF")}, gen(self, depth - 1, in_loop)});
      return LocalProtocol::choice(MessageType("signal"), std::move(bs));
    }
    return LocalProtocol::prefix(action(self), gen(self, depth - 1, in_loop));
  }

  std::mt19937_64 rng_;
  int n_;
  int depth_;
};

/// `loop t. p1->p2:m. p2->p3:m. ... t` over a chain of `n` messages among
/// five roles: a configuration of size linear in n.
inline LocalConfiguration chain(std::size_t n) {
  GlobalProtocol g = GlobalProtocol::var("t");
  std::vector<GlobalProtocol> steps;
  for (std::size_t i = n; i-- > 0;) {
    auto s = Participant("p" + std::to_string(i % 5 + 1));
    auto r = Participant("p" + std::to_string((i + 1) % 5 + 1));
    g = GlobalProtocol::pass(s, r, MessageType("m"), g);
  }
  g = GlobalProtocol::rec("t", g);
  return project(g).value();
}

}  // namespace icps::testing
