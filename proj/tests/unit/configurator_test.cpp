#include <gtest/gtest.h>

#include <functional>

#include "icps/configurator.hpp"
#include "icps/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/running_example.hpp"

using namespace icps;
using icps::testing::binding;

namespace {

const ProcessGraph& proc() { return *binding("simple").process; }
const Repository& repo() { return *binding("agents").repository; }
const std::vector<EstimationTree>& trees() { return *binding("trees").trees; }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.diagnostics().front().code;
  }
  return "";
}

}  // namespace

TEST(Configure, SingleSensorTree) {
  auto c = configure(trees()[0], repo(), "controller", "u", proc());
  EXPECT_EQ(c.configuration.count(), 3u);
  ASSERT_TRUE(c.certified);
  EXPECT_EQ(to_string(*c.certified),
            "loop. s6->controller:head. controller->u:signal { ON: loop } or { OFF: loop }");
  EXPECT_EQ(c.assignment_of("s6")->template_name, "headSensor");
  EXPECT_EQ(is_live(c.configuration, 100000).verdict, Verdict::True);
}

TEST(Configure, TwoPipeTreeMatchesTheReferenceLoop) {
  auto c = configure(trees()[1], repo(), "controller", "u", proc());
  auto renamed = rename_participants(c.configuration, {{"s5", "s1"}, {"s7", "s2"}});
  Interpreter ref;
  ASSERT_TRUE(ref.run(icps::testing::fixture("tank_loop.icps")).ok());
  EXPECT_EQ(sort_choices(renamed), sort_choices(*ref.lookup("lconfig").local));
  auto g = rename_participants(*c.certified, {{"s5", "s1"}, {"s7", "s2"}});
  EXPECT_EQ(sort_choices(g), sort_choices(*ref.lookup("gconfig").global));
}

TEST(Configure, LargestTreeComposes) {
  auto c = configure(trees()[6], repo(), "controller", "u", proc());
  // s1, s3, s4, s8, four estimators, controller, u
  EXPECT_EQ(c.configuration.count(), 10u);
  EXPECT_TRUE(c.certified);
  EXPECT_EQ(is_live(c.configuration, 100000).verdict, Verdict::True);
  EXPECT_EQ(is_deadlock_free(c.configuration, 100000).verdict, Verdict::True);
}

TEST(Configure, EveryTreeComposesAndIsLive) {
  for (const auto& t : trees()) {
    auto c = configure(t, repo(), "controller", "u", proc());
    EXPECT_EQ(is_live(c.configuration, 100000).verdict, Verdict::True) << to_string(t);
  }
}

TEST(Configure, Deterministic) {
  auto a = configure(trees()[3], repo(), "controller", "u", proc());
  auto b = configure(trees()[3], repo(), "controller", "u", proc());
  EXPECT_EQ(a.configuration, b.configuration);
  EXPECT_EQ(a.assignments, b.assignments);
  EXPECT_EQ(*a.certified, *b.certified);
}

TEST(Configure, Errors) {
  EXPECT_EQ(code_of([] { configure(trees()[0], repo(), "nobody", "u", proc()); }), "template-not-found");
  EXPECT_EQ(code_of([] { configure(trees()[0], repo(), "headSensor", "u", proc()); }), "template-kind");
  EXPECT_EQ(code_of([] { configure(trees()[0], repo(), "controller", "t", proc()); }), "unknown-actuator");
  EXPECT_EQ(code_of([] { configure(trees()[0], repo(), "controller", "u", remove_device(proc(), "dev2")); }),
            "dead-device");
}

TEST(Configure, ArityMismatch) {
  auto r = repo();
  for (auto& t : r.templates)
    if (t.name == "tmass") t.protocol = parse_local("loop. producer1?flow. consumer1!head. loop");
  EXPECT_EQ(code_of([&] { configure(trees()[1], r, "controller", "u", proc()); }), "arity-mismatch");
}

TEST(Configure, SignalMismatch) {
  auto r = repo();
  for (auto& t : r.templates)
    if (t.kind == TemplateKind::Actuate)
      t.protocol = parse_local("loop. producer1?mode { ON: loop } or { OFF: loop }");
  EXPECT_EQ(code_of([&] { configure(trees()[0], r, "controller", "u", proc()); }), "signal-mismatch");
}

TEST(Configure, MissingTemplate) {
  auto r = repo();
  std::erase_if(r.templates, [](const AgentTemplate& t) { return t.name == "dmass"; });
  EXPECT_EQ(code_of([&] { configure(trees()[2], r, "controller", "u", proc()); }), "template-not-found");
}

TEST(Configure, IncompatibleTemplatesDoNotCompose) {
  auto r = repo();
  for (auto& t : r.templates)
    if (t.kind == TemplateKind::Sense && t.subject == "head")
      t.protocol = parse_local("loop. consumer1!flow. loop");
  EXPECT_NO_THROW(instantiate(trees()[0], r, "controller", "u", proc()));
  EXPECT_FALSE(compose(instantiate(trees()[0], r, "controller", "u", proc()).configuration));
  EXPECT_THROW(configure(trees()[0], r, "controller", "u", proc()), Error);
}
