#include <gtest/gtest.h>

#include "icps/protocol.hpp"
#include "icps/syntax.hpp"

using namespace icps;

namespace {

LocalProtocol L(const char* s) { return parse_local(s); }
GlobalProtocol G(const char* s) { return parse_global(s); }

}  // namespace

TEST(Protocol, IdentifiersAreValidated) {
  EXPECT_NO_THROW(Participant("t.tank_mass"));
  EXPECT_THROW(Participant("1abc"), Error);
  EXPECT_THROW(Participant(""), Error);
  EXPECT_THROW(MessageType("a.b"), Error);
}

TEST(Protocol, PrintsSurfaceSyntax) {
  auto p = LocalProtocol::rec(
      "loop", LocalProtocol::prefix(receive("s1", "flow"),
                                    LocalProtocol::prefix(send("controller", "head"),
                                                          LocalProtocol::var("loop"))));
  EXPECT_EQ(to_string(p), "loop. s1?flow. controller!head. loop");
  EXPECT_EQ(L("loop. s1?flow. controller!head. loop"), p);
  EXPECT_EQ(to_string(L("u!signal { ON: end } or { OFF: end }")), "u!signal { ON: end } or { OFF: end }");
}

TEST(Protocol, ChoiceNeedsTwoBranchesOnOnePeer) {
  using B = LocalProtocol::Branch;
  auto e = LocalProtocol::end();
  EXPECT_THROW(LocalProtocol::choice(MessageType("signal"), {B{send("u", "ON"), e}}), Error);
  EXPECT_THROW(LocalProtocol::choice(MessageType("signal"), {B{send("u", "ON"), e}, B{send("v", "OFF"), e}}),
               Error);
  EXPECT_THROW(LocalProtocol::choice(MessageType("signal"), {B{send("u", "ON"), e}, B{receive("u", "OFF"), e}}),
               Error);
  EXPECT_THROW(LocalProtocol::choice(MessageType("signal"), {B{send("u", "ON"), e}, B{send("u", "ON"), e}}),
               Error);
  EXPECT_NO_THROW(LocalProtocol::choice(MessageType("signal"), {B{send("u", "ON"), e}, B{send("u", "OFF"), e}}));
}

TEST(Protocol, UnguardedRecursionIsRejected) {
  EXPECT_THROW(LocalProtocol::rec("t", LocalProtocol::var("t")), Error);
  EXPECT_THROW(LocalProtocol::rec("t", LocalProtocol::rec("s", LocalProtocol::var("t"))), Error);
  EXPECT_THROW(GlobalProtocol::rec("t", GlobalProtocol::var("t")), Error);
  EXPECT_NO_THROW(L("t. s. p!a. t"));
}

TEST(Protocol, StructuralEqualityAndHash) {
  auto a = L("t. p!a. q?b. t");
  auto b = L("t. p!a. q?b. t");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, L("t. p!a. q?c. t"));
  EXPECT_NE(a, L("s. p!a. q?b. s"));
}

TEST(Protocol, TransitionsUnfoldRecursion) {
  auto p = L("t. p!a. t");
  auto ts = transitions(p);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].first, send("p", "a"));
  EXPECT_EQ(ts[0].second, p);
  EXPECT_EQ(local_step(p, send("p", "a")), std::vector<LocalProtocol>{p});
  EXPECT_TRUE(local_step(p, send("p", "b")).empty());
  EXPECT_TRUE(transitions(LocalProtocol::end()).empty());
}

TEST(Protocol, ChoiceTransitions) {
  auto p = L("q!signal { ON: end } or { OFF: p?a. end }");
  auto ts = transitions(p);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0].first, send("q", "ON"));
  EXPECT_EQ(ts[1].second, L("p?a. end"));
}

TEST(Protocol, SubstitutionRespectsShadowing) {
  auto body = L("p!a. t");
  auto r = substitute(body, L("end"), "t");
  EXPECT_EQ(r, L("p!a. end"));
  auto shadow = LocalProtocol::rec("t", L("p!a. t"));
  EXPECT_EQ(substitute(shadow, L("end"), "t"), shadow);
}

TEST(Protocol, FreeLabels) {
  EXPECT_TRUE(free_labels(L("t. p!a. t")).empty());
  EXPECT_EQ(free_labels(L("p!a. t")), std::set<std::string>{"t"});
  EXPECT_THROW(check_closed(L("p!a. t")), Error);
  EXPECT_EQ(free_labels(G("p->q:a. s")), std::set<std::string>{"s"});
}

TEST(Protocol, SizeCountsConstructors) {
  EXPECT_EQ(size(L("end")), 1u);
  EXPECT_EQ(size(L("t. p!a. t")), 2u);
  EXPECT_EQ(size(L("q!s { ON: end } or { OFF: p?a. end }")), 5u);
}

TEST(Protocol, RenamesPeers) {
  auto p = rename_participants(L("t. producer1?flow. consumer1!head. t"),
                               {{"producer1", "s5"}, {"consumer1", "controller"}});
  EXPECT_EQ(p, L("t. s5?flow. controller!head. t"));
  auto g = rename_participants(G("a->b:m. end"), {{"a", "c"}});
  EXPECT_EQ(g, G("c->b:m. end"));
}

TEST(Protocol, SortChoicesOrdersBranchesByLabel) {
  EXPECT_EQ(sort_choices(L("u!signal { ON: end } or { OFF: end }")),
            L("u!signal { OFF: end } or { ON: end }"));
}

TEST(Protocol, GlobalParticipantsInFirstAppearanceOrder) {
  auto g = G("loop. s1->t.tank_mass:flow. s2->t.tank_mass:flow. t.tank_mass->controller:head. loop");
  std::vector<std::string> names;
  for (const auto& p : participants(g)) names.push_back(p.name());
  EXPECT_EQ(names, (std::vector<std::string>{"s1", "t.tank_mass", "s2", "controller"}));
}

TEST(Protocol, SelfMessagesAreRejected) {
  EXPECT_THROW(G("p->p:a. end"), Error);
}
