// Randomised properties over generated protocols and configurations. Seeds
// are fixed so that failures reproduce.

#include <gtest/gtest.h>

#include "icps/session.hpp"
#include "support/generators.hpp"

using namespace icps;
using icps::testing::GlobalGen;
using icps::testing::LocalGen;

namespace {

constexpr std::size_t kBudget = 100000;

}  // namespace

TEST(Properties, ProjectThenComposeIsTheIdentity) {
  GlobalGen gen(20240517);
  std::size_t checked = 0, attempts = 0;
  while (checked < 1000) {
    ASSERT_LT(++attempts, 20000u) << "generator yields too few projectable protocols";
    auto g = gen.next();
    auto l = project(g);
    if (!l) continue;
    ++checked;
    auto back = compose(l.value());
    ASSERT_TRUE(back) << to_string(g) << "\n" << back.error().message;
    ASSERT_EQ(back.value().global, g) << to_string(g) << "\ncomposed: " << to_string(back.value().global);
    ASSERT_EQ(is_live(l.value(), kBudget).verdict, Verdict::True) << to_string(g);
  }
}

TEST(Properties, ComposeThenProjectIsTheIdentity) {
  GlobalGen gen(77);
  std::size_t checked = 0, attempts = 0;
  while (checked < 300) {
    ASSERT_LT(++attempts, 20000u);
    auto l = project(gen.next());
    if (!l) continue;
    ++checked;
    auto g = compose(l.value());
    ASSERT_TRUE(g);
    auto again = project(g.value().global, l.value().domain());
    ASSERT_TRUE(again);
    EXPECT_EQ(again.value(), l.value());
  }
}

TEST(Properties, LiveImpliesDeadlockFree) {
  LocalGen gen(4242);
  std::size_t live = 0;
  for (int i = 0; i < 1000; ++i) {
    auto c = gen.next();
    auto lv = is_live(c, kBudget);
    ASSERT_NE(lv.verdict, Verdict::BudgetExceeded);
    if (lv.verdict != Verdict::True) continue;
    ++live;
    EXPECT_EQ(is_deadlock_free(c, kBudget).verdict, Verdict::True) << to_string(c);
  }
  EXPECT_GT(live, 0u);
}

TEST(Properties, CompositionIsLinear) {
  for (std::size_t n : {16u, 64u, 256u}) {
    auto c = icps::testing::chain(n);
    auto r = compose(c);
    ASSERT_TRUE(r);
    double ratio = static_cast<double>(r.value().steps) / static_cast<double>(size(c));
    EXPECT_GT(ratio, 0.0);
    EXPECT_LT(ratio, 4.0);
  }
}
