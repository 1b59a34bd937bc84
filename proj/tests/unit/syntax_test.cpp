#include <gtest/gtest.h>

#include "icps/interpreter.hpp"
#include "icps/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/running_example.hpp"

using namespace icps;
using icps::testing::fixture;

namespace {

const char* kFixtures[] = {"wdn_domain.icps",     "wdn_repository.icps", "compact_repository.icps",
                           "simple_process_raw.icps", "tank_loop.icps",  "reasoning.icps"};

}  // namespace

TEST(Lexer, QualifiedNamesAndSymbols) {
  auto ts = tokenize("t.tank_mass!flow. loop := -> 1.5 \"x y\" # comment\nnext");
  std::vector<std::string> texts;
  for (const auto& t : ts) texts.push_back(t.text);
  EXPECT_EQ(texts, (std::vector<std::string>{"t.tank_mass", "!", "flow", ".", "loop", ":=", "->", "1.5",
                                             "x y", "next", ""}));
  EXPECT_TRUE(ts[9].line_start);
  EXPECT_EQ(ts[9].pos.line, 2u);
  EXPECT_THROW(tokenize("a $ b"), Error);
}

TEST(Parser, GoldenFixturesParseCleanly) {
  for (const char* f : kFixtures) {
    auto r = parse(fixture(f));
    EXPECT_TRUE(r.ok()) << f << ": " << (r.ok() ? "" : r.diagnostics.front().message);
    EXPECT_FALSE(r.commands.empty()) << f;
  }
  EXPECT_TRUE(parse(icps::testing::script("running_example.icps")).ok());
}

TEST(Parser, EmptyInput) {
  auto r = parse("");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.commands.empty());
  EXPECT_TRUE(parse("  # only a comment\n").commands.empty());
}

TEST(Parser, CommandShapes) {
  auto r = parse(fixture("reasoning.icps"));
  ASSERT_EQ(r.commands.size(), 4u);
  EXPECT_EQ(r.commands[1].expr->kind, Expr::Kind::Traverse);
  EXPECT_EQ(r.commands[1].expr->name, "t.head");
  const auto& cfg = *r.commands[2].expr;
  EXPECT_EQ(cfg.kind, Expr::Kind::Configure);
  EXPECT_EQ(cfg.args[0]->kind, Expr::Kind::Index);
  EXPECT_EQ(cfg.args[0]->index, 1u);
  EXPECT_EQ(cfg.name, "controller");
  EXPECT_EQ(cfg.extra, "u");
  auto m = parse("show seg\nmermaid seg \"out.mmd\"\nx := remove_device simple dev2");
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m.commands[0].kind, Command::Kind::Show);
  EXPECT_EQ(m.commands[1].kind, Command::Kind::Mermaid);
  EXPECT_EQ(m.commands[1].path, "out.mmd");
  EXPECT_EQ(m.commands[2].expr->kind, Expr::Kind::RemoveDevice);
}

TEST(Parser, RecoversAtTheNextLine) {
  auto r = parse("a := traverse\nb := translate simple\nc := configure x\nd := compose c\n");
  EXPECT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics[0].pos.line, 1u);
  EXPECT_EQ(r.diagnostics[1].pos.line, 3u);
  EXPECT_EQ(r.commands.size(), 2u);
}

TEST(Parser, DiagnosticsCarryPositions) {
  auto r = parse("x := local {\n  p = q!a. t\n}");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].pos.line, 2u);
  EXPECT_THROW(parse_local("p!a. end extra"), Error);
  EXPECT_THROW(parse_global("p->q. end"), Error);
}

TEST(RoundTrip, Domain) {
  auto d = parse_domain(fixture("wdn_domain.icps"));
  EXPECT_EQ(parse_domain(print_domain(d)), d);
}

TEST(RoundTrip, Repository) {
  for (const char* f : {"wdn_repository.icps"}) {
    auto r = parse_repository(fixture(f));
    EXPECT_EQ(parse_repository(print_repository(r)), r);
  }
  auto compact = parse(fixture("compact_repository.icps"));
  ASSERT_TRUE(compact.ok());
  const auto& r = *compact.commands[0].expr->repository;
  EXPECT_EQ(parse_repository(print_repository(r)), r);
}

TEST(RoundTrip, Process) {
  auto r = parse(fixture("simple_process_raw.icps"));
  ASSERT_TRUE(r.ok());
  const auto& p = *r.commands[0].expr->process;
  EXPECT_EQ(parse_process(print_process(p)), p);
}

TEST(RoundTrip, Protocols) {
  Interpreter in;
  ASSERT_TRUE(in.run(fixture("tank_loop.icps")).ok());
  const auto& l = *in.lookup("lconfig").local;
  EXPECT_EQ(parse_local_configuration(show(in.lookup("lconfig"))), l);
  const auto& g = *in.lookup("gconfig").global;
  auto back = parse(print_global(g));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back.commands[0].expr->global, g);
  EXPECT_EQ(parse_global(to_string(g)), g);
}

TEST(RoundTrip, DerivedProcess) {
  const auto& p = *icps::testing::binding("simple").process;
  auto after = remove_device(p, "dev2");
  EXPECT_EQ(parse_process(print_process(after.to_decl())), after.to_decl());
}
