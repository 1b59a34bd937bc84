// Domain, process, and state estimation graph tests over the WDN example.

#include <gtest/gtest.h>

#include <functional>

#include "icps/domain.hpp"
#include "icps/estimation.hpp"
#include "icps/process.hpp"
#include "icps/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/tree_oracle.hpp"

using namespace icps;
using icps::testing::fixture;

namespace {

const IndustrialDomain& wdn() {
  static const IndustrialDomain d = parse_domain(fixture("wdn_domain.icps"));
  return d;
}

const char* kSimple = R"(process wdn {
  device dev1, dev2, dev3
  physical r, d demand
  physical j junction
  physical p1, p2 pipe
  physical t tank
  actuator u@dev1 pump
  sensor s1@dev1, s3@dev1, s6@dev2 head
  sensor s2@dev1, s4@dev1, s5@dev2, s7@dev2, s8@dev3 flow
  conn r->u, u->j, j->p1, p1->t, t->p2, p2->d, r->s1,
       u->s2, j->s3, j->s4, p1->s5, t->s6, p2->s7, d->s8
})";

ProcessGraph simple() { return build_process(parse_process(kSimple), wdn()); }

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

std::vector<std::string> codes_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return codes(e.diagnostics());
  }
  return {};
}

}  // namespace

TEST(Domain, WdnIsValid) {
  EXPECT_TRUE(validate_domain(wdn()).empty());
  EXPECT_EQ(wdn().properties.size(), 5u);
  EXPECT_EQ(wdn().model.size(), 4u);
  EXPECT_EQ(wdn().classes.size(), 5u);
  EXPECT_EQ(wdn().rules.size(), 12u);
  ASSERT_NE(wdn().find_property("signal"), nullptr);
  EXPECT_EQ(wdn().find_property("signal")->labels, (std::vector<std::string>{"ON", "OFF"}));
}

TEST(Domain, StaticProperties) {
  EXPECT_TRUE(wdn().is_static_property("tank_shape"));
  EXPECT_TRUE(wdn().is_static_property("link_shape"));
  EXPECT_FALSE(wdn().is_static_property("head"));
  EXPECT_FALSE(wdn().is_static_property("flow"));
}

TEST(Domain, RuleLookupFallsBackToReverse) {
  bool reversed = false;
  ASSERT_NE(wdn().find_rule("pipe", "junction", &reversed), nullptr);
  EXPECT_FALSE(reversed);
  auto d = parse_domain(R"(domain {
    property flow
    model m
    physical a(flow, m): flow -> m
    physical b(flow)
    translation a -> b: a.flow -> a.m
  })");
  ASSERT_NE(d.find_rule("b", "a", &reversed), nullptr);
  EXPECT_TRUE(reversed);
  EXPECT_EQ(d.find_rule("a", "a"), nullptr);
}

TEST(Domain, Diagnostics) {
  auto d = parse_domain(R"(domain {
    property flow, flow, signal {ON, ON}
    model m
    physical a(flow, x, signal): flow -> m
    physical a(flow)
    translation a -> c: a.flow -> c.flow
  })");
  auto cs = codes(validate_domain(d));
  for (const char* c : {"duplicate-name", "duplicate-label", "unknown-attribute", "enum-attribute",
                        "duplicate-class", "unknown-class"})
    EXPECT_NE(std::find(cs.begin(), cs.end(), c), cs.end()) << c;
}

TEST(Repository, WdnIsValid) {
  auto r = parse_repository(fixture("wdn_repository.icps"));
  EXPECT_TRUE(validate_repository(r, &wdn()).empty());
  EXPECT_EQ(r.templates.size(), 8u);
  EXPECT_EQ(lookup_template(r, TemplateKind::Estimate, "junction_mass").producers(), 2u);
  EXPECT_EQ(lookup_template(r, TemplateKind::Control, "pump").consumers(), 1u);
  EXPECT_EQ(lookup_template(r, TemplateKind::Sense, "flow").producers(), 0u);
}

TEST(Repository, Diagnostics) {
  auto r = parse_repository(R"(repository wdn {
    estimate nothing using a = loop. producer1?flow. consumer1!flow. loop
    sense head using b = loop. somebody!head. loop
    sense flow using c = loop. consumer1!pressure. loop
    control pump using d = loop. producer1?head. consumer1!signal { ON: loop } or { MAYBE: loop }
    control pump using d = end
  })");
  auto cs = codes(validate_repository(r, &wdn()));
  for (const char* c : {"unknown-subject", "bad-placeholder", "unknown-payload", "unknown-label",
                        "duplicate-template"})
    EXPECT_NE(std::find(cs.begin(), cs.end(), c), cs.end()) << c;
  EXPECT_THROW(lookup_template(r, TemplateKind::Actuate, "pump"), Error);
}

TEST(Process, BuildsTheRunningExample) {
  auto p = simple();
  EXPECT_EQ(p.components.size(), 7u);
  EXPECT_EQ(p.sensors.size(), 8u);
  EXPECT_EQ(p.attached_component("s6")->name, "t");
  EXPECT_EQ(p.attached_component("s1")->name, "r");
  EXPECT_EQ(build_process(p.to_decl(), wdn()), p);
}

TEST(Process, Diagnostics) {
  auto cs = codes_of([] {
    build_process(parse_process(R"(process wdn {
      device dev1
      physical a, a pipe
      physical b valve
      actuator u pump
      actuator v@dev9 pump
      sensor s1@dev1 pressure
      sensor s2 head
      conn a->a, a->zz, s2->a
    })"), wdn());
  });
  for (const char* c : {"duplicate-name", "unknown-class", "missing-device", "unknown-device",
                        "unknown-property", "self-connection", "unknown-node", "sensor-source",
                        "sensor-attachment"})
    EXPECT_NE(std::find(cs.begin(), cs.end(), c), cs.end()) << c;
}

TEST(Process, RemoveDevice) {
  auto p = remove_device(simple(), "dev2");
  EXPECT_FALSE(p.device_alive("dev2"));
  EXPECT_EQ(p.sensors.size(), 5u);
  EXPECT_EQ(p.find_sensor("s5"), nullptr);
  for (const auto& c : p.connections) EXPECT_NE(c.to, "s6");
  EXPECT_EQ(codes_of([] { remove_device(simple(), "dev9"); }), std::vector<std::string>{"unknown-device"});
  EXPECT_EQ(codes_of([] { remove_device(simple(), "dev1", std::string("u")); }),
            std::vector<std::string>{"actuator-device"});
}

TEST(Translate, HandCountedGraph) {
  auto g = translate(simple(), wdn());
  // 7 components x 3 attributes, plus 8 sensing points
  EXPECT_EQ(g.nodes().size(), 29u);
  EXPECT_EQ(g.count(SegKind::Sensing), 8u);
  EXPECT_EQ(g.count(SegKind::Estimator), 7u);
  EXPECT_EQ(g.count(SegKind::State), 14u);
  // 14 intra-class, 16 from translation rules, 8 sensing
  EXPECT_EQ(g.edges().size(), 38u);
  EXPECT_TRUE(g.has_edge("s6", "t.head"));
  EXPECT_TRUE(g.has_edge("p1.flow", "t.tank_mass"));
  EXPECT_TRUE(g.has_edge("t.tank_mass", "t.head"));
  EXPECT_TRUE(g.has_edge("j.junction_mass", "p1.flow"));
  EXPECT_TRUE(g.has_edge("j.head", "u.link_energy"));
  EXPECT_TRUE(g.is_static(*g.find("t.tank_shape")));
}

TEST(Translate, EmptyProcess) {
  auto g = translate(build_process(parse_process("process wdn {}"), wdn()), wdn());
  EXPECT_TRUE(g.nodes().empty());
  EXPECT_TRUE(g.edges().empty());
}

TEST(Translate, MissingRule) {
  auto p = build_process(parse_process("process wdn { physical a pipe physical b pipe conn a->b }"), wdn());
  EXPECT_EQ(codes_of([&] { translate(p, wdn()); }), std::vector<std::string>{"missing-rule"});
}

TEST(Traverse, SevenTreesBeforeTheFailure) {
  auto g = translate(simple(), wdn());
  auto ts = traverse("t.head", g);
  ASSERT_EQ(ts.size(), 7u);
  EXPECT_EQ(to_string(ts[0]), "t.head <- s6");
  EXPECT_EQ(to_string(ts[1]), "t.head <- t.tank_mass(p1.flow <- s5, p2.flow <- s7)");
  for (const auto& t : ts) EXPECT_TRUE(validate_tree(t, g).empty()) << to_string(t);
  EXPECT_EQ(icps::testing::canonical(ts), icps::testing::TreeOracle(g).enumerate("t.head"));
}

TEST(Traverse, TwoTreesAfterTheFailure) {
  auto g = translate(remove_device(simple(), "dev2"), wdn());
  auto ts = traverse("t.head", g);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(to_string(ts[0]),
            "t.head <- t.tank_mass(p1.flow <- j.junction_mass(j.flow <- s4, u.flow <- s2), "
            "p2.flow <- d.demand_mass(d.flow <- s8))");
  EXPECT_EQ(to_string(ts[1]),
            "t.head <- t.tank_mass(p1.flow <- j.junction_mass(j.flow <- s4, u.flow <- "
            "u.link_energy(r.head <- s1, j.head <- s3)), p2.flow <- d.demand_mass(d.flow <- s8))");
  EXPECT_EQ(icps::testing::canonical(ts), icps::testing::TreeOracle(g).enumerate("t.head"));
}

TEST(Traverse, ShapesAndUnknownNodes) {
  auto g = translate(simple(), wdn());
  EXPECT_TRUE(traverse("t.tank_shape", g).empty());
  EXPECT_EQ(codes_of([&] { traverse("t.pressure", g); }), std::vector<std::string>{"unknown-node"});
  EXPECT_EQ(codes_of([&] { traverse("s6", g); }), std::vector<std::string>{"unknown-node"});
}

TEST(Traverse, TreesRecordPreconfiguredShapes) {
  auto g = translate(simple(), wdn());
  auto ts = traverse("t.head", g);
  const auto& tm = ts[1].root.children.at(0);
  ASSERT_EQ(tm.preconfigured.size(), 1u);
  EXPECT_EQ(tm.preconfigured[0].id(), "t.tank_shape");
  EXPECT_EQ(ts[1].sensing_leaves().size(), 2u);
  EXPECT_EQ(ts[6].estimators().size(), 4u);
  EXPECT_EQ(ts[6].estimators().back().id(), "t.tank_mass");
}

TEST(Traverse, RemovingSensorsNeverAddsTrees) {
  auto base = simple();
  auto before = traverse("t.head", translate(base, wdn())).size();
  for (const char* dev : {"dev2", "dev3"}) {
    auto after = traverse("t.head", translate(remove_device(base, dev), wdn())).size();
    EXPECT_LE(after, before) << dev;
  }
}

TEST(Traverse, DepthCap) {
  auto g = translate(simple(), wdn());
  EXPECT_EQ(traverse("t.head", g, TraverseOptions{1}).size(), 1u);
}
