#include <gtest/gtest.h>

#include <filesystem>

#include "icps/interpreter.hpp"
#include "icps/mermaid.hpp"
#include "support/fixtures.hpp"
#include "support/running_example.hpp"

using namespace icps;
using icps::testing::binding;
using icps::testing::fixture;

namespace {

std::string first_code(const Interpreter::RunResult& r) {
  return r.diagnostics.empty() ? "" : r.diagnostics.front().code;
}

Interpreter with_kb() {
  Interpreter in;
  auto text = icps::testing::script("running_example.icps");
  // keep the declarations only
  auto cut = text.find("seg :=");
  EXPECT_NE(cut, std::string::npos);
  EXPECT_TRUE(in.run(text.substr(0, cut)).ok());
  return in;
}

}  // namespace

TEST(Interpreter, ReasoningBindings) {
  auto& in = icps::testing::running_example();
  for (const char* n : {"wdn", "agents", "simple", "seg", "trees", "lconfig", "gconfig"})
    EXPECT_TRUE(in.has(n)) << n;
  EXPECT_EQ(binding("seg").kind, Value::Kind::Graph);
  EXPECT_EQ(binding("trees").trees->size(), 7u);
  EXPECT_EQ(binding("lconfig").kind, Value::Kind::Local);
  ASSERT_TRUE(binding("lconfig").loop);
  EXPECT_EQ(binding("gconfig").kind, Value::Kind::Global);
  EXPECT_EQ(*binding("gconfig").global, *binding("lconfig").loop->certified);
}

TEST(Interpreter, Output) {
  auto in = with_kb();
  auto r = in.run("seg := translate simple\ntrees := traverse t.head seg\nseg\n");
  ASSERT_TRUE(r.ok());
  EXPECT_NE(r.output.find("seg: state estimation graph with 29 nodes and 38 edges"), std::string::npos);
  EXPECT_NE(r.output.find("trees: 7 estimation trees rooted at t.head"), std::string::npos);
  auto s = in.run("show trees");
  EXPECT_NE(s.output.find("[1] t.head <- s6"), std::string::npos);
  EXPECT_NE(s.output.find("[7] "), std::string::npos);
}

TEST(Interpreter, UndeclaredConnectionEndpoints) {
  Interpreter in;
  ASSERT_TRUE(in.run("wdn := " + fixture("wdn_domain.icps")).ok());
  auto r = in.run(fixture("simple_process_raw.icps"));
  EXPECT_EQ(first_code(r), "unknown-node");
  EXPECT_FALSE(in.has("simple"));
}

TEST(Interpreter, UnboundNameAtEvaluation) {
  Interpreter in;
  auto r = in.run("seg := translate nothing");
  EXPECT_EQ(first_code(r), "unbound-name");
  EXPECT_EQ(r.diagnostics[0].pos.line, 1u);
  EXPECT_THROW(in.lookup("nothing"), Error);
}

TEST(Interpreter, StopsAtTheFirstFailure) {
  auto in = with_kb();
  auto r = in.run("a := translate simple\nb := translate agents\nc := translate simple");
  EXPECT_EQ(first_code(r), "kind-mismatch");
  EXPECT_EQ(r.diagnostics[0].pos.line, 2u);
  EXPECT_TRUE(in.has("a"));
  EXPECT_FALSE(in.has("c"));
}

TEST(Interpreter, SyntaxErrorsRunNothing) {
  Interpreter in;
  auto r = in.run("x := local { p = end }\ny := traverse\n");
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(in.has("x"));
}

TEST(Interpreter, Errors) {
  auto in = with_kb();
  EXPECT_EQ(first_code(in.run("s := translate simple\nx := traverse t.pressure s")), "unknown-node");
  EXPECT_EQ(first_code(in.run("ts := traverse t.head s\nx := configure ts[9] agents controller u")),
            "index-range");
  EXPECT_EQ(first_code(in.run("x := configure ts[1] agents controller t")), "unknown-actuator");
  EXPECT_EQ(first_code(in.run("x := process nowhere { physical a tank }")), "");
  EXPECT_EQ(first_code(in.run("x := remove_device simple dev7")), "unknown-device");
  EXPECT_EQ(first_code(in.run("mermaid agents \"x.mmd\"")), "no-diagram");
}

TEST(Interpreter, UnknownDomainWithoutAnyDeclaration) {
  Interpreter in;
  EXPECT_EQ(first_code(in.run("x := process nowhere { physical a tank }")), "unknown-domain");
}

TEST(Interpreter, RemoveDeviceThenTraverse) {
  auto in = with_kb();
  auto r = in.run("after := remove_device simple dev2\nts := traverse t.head translate after");
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().message;
  EXPECT_EQ(in.lookup("ts").trees->size(), 2u);
}

TEST(Interpreter, ProjectThenCompose) {
  auto in = with_kb();
  auto r = in.run(fixture("tank_loop.icps") + "\nl2 := project gconfig\ng2 := compose l2\n");
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().message;
  EXPECT_EQ(*in.lookup("g2").global, *in.lookup("gconfig").global);
  EXPECT_EQ(sort_choices(*in.lookup("l2").local), sort_choices(*in.lookup("lconfig").local));
  EXPECT_NE(r.output.find("live: true"), std::string::npos);
}

TEST(Interpreter, CheckReportsEveryDeclaration) {
  Interpreter in;
  auto r = in.check("a := local { p = q!a. end }\nb := global p->q:a. end\nc := local { p = q!a. t }");
  EXPECT_EQ(r.diagnostics.size(), 1u);
  auto ok = in.check(icps::testing::script("running_example.icps"));
  EXPECT_TRUE(ok.ok());
}

TEST(Interpreter, MermaidWritesAFile) {
  auto in = with_kb();
  auto path = std::filesystem::temp_directory_path() / "icps_interp_test.mmd";
  std::filesystem::remove(path);
  auto r = in.run("s := translate simple\nmermaid s \"" + path.string() + "\"");
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_EQ(icps::testing::read_text(path.string()).rfind("flowchart LR", 0), 0u);
  std::filesystem::remove(path);
}

TEST(Mermaid, Tree) {
  const auto& ts = *binding("trees").trees;
  auto m = mermaid(ts[1]);
  for (const char* s : {"s5", "s7", "t.tank_mass", "t.head"}) EXPECT_NE(m.find(s), std::string::npos) << s;
  EXPECT_EQ(m.rfind("flowchart LR", 0), 0u);
}

TEST(Mermaid, EmptyGraphIsHeaderOnly) {
  auto m = mermaid(StateEstimationGraph{});
  EXPECT_EQ(m.find("st_"), std::string::npos);
  EXPECT_EQ(m.find("-->"), std::string::npos);
  EXPECT_EQ(m.rfind("flowchart LR", 0), 0u);
}

TEST(Mermaid, Configuration) {
  Interpreter in;
  ASSERT_TRUE(in.run(fixture("tank_loop.icps")).ok());
  auto m = mermaid(*in.lookup("lconfig").local, &*in.lookup("gconfig").global);
  EXPECT_EQ(m.rfind("sequenceDiagram", 0), 0u);
  std::size_t participants = 0;
  for (std::size_t at = 0; (at = m.find("participant ", at)) != std::string::npos; ++at) ++participants;
  EXPECT_EQ(participants, 5u);
  EXPECT_NE(m.find("s1->>t_tank_mass: flow"), std::string::npos);
  EXPECT_NE(m.find("alt"), std::string::npos);
}

TEST(Mermaid, Graph) {
  auto m = mermaid(*binding("seg").graph);
  EXPECT_NE(m.find("se_s6"), std::string::npos);
  EXPECT_NE(m.find("es_t_tank_mass"), std::string::npos);
}
