#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "icps/configurator.hpp"
#include "icps/interpreter.hpp"
#include "icps/session.hpp"
#include "icps/supervisor.hpp"

using namespace icps;

namespace {

std::string read_script(const std::string& name) {
  std::ifstream in(std::string(ICPS_SCRIPT_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Interpreter& example() {
  static Interpreter in = [] {
    Interpreter i;
    i.run(read_script("running_example.icps"));
    return i;
  }();
  return in;
}

// `t. p1->p2:m. p2->p3:m. ... t` with n messages over five roles.
LocalConfiguration chain(std::size_t n) {
  GlobalProtocol g = GlobalProtocol::var("t");
  for (std::size_t i = n; i-- > 0;)
    g = GlobalProtocol::pass(Participant("p" + std::to_string(i % 5 + 1)),
                             Participant("p" + std::to_string((i + 1) % 5 + 1)), MessageType("m"), g);
  return project(GlobalProtocol::rec("t", g)).value();
}

void BM_ComposeChain(benchmark::State& st) {
  auto c = chain(static_cast<std::size_t>(st.range(0)));
  std::size_t steps = 0;
  for (auto _ : st) {
    auto r = compose(c);
    steps = r.value().steps;
    benchmark::DoNotOptimize(r);
  }
  st.counters["size"] = static_cast<double>(size(c));
  st.counters["steps"] = static_cast<double>(steps);
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ComposeChain)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_ProjectChain(benchmark::State& st) {
  auto g = compose(chain(static_cast<std::size_t>(st.range(0)))).value().global;
  for (auto _ : st) benchmark::DoNotOptimize(project(g));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ProjectChain)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_IsLiveChain(benchmark::State& st) {
  auto c = chain(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(is_live(c, 1000000));
}
BENCHMARK(BM_IsLiveChain)->RangeMultiplier(4)->Range(16, 1024);

void BM_TranslateRunningExample(benchmark::State& st) {
  const auto& v = example().lookup("simple");
  for (auto _ : st) benchmark::DoNotOptimize(translate(*v.process, *v.domain));
}
BENCHMARK(BM_TranslateRunningExample);

void BM_TraverseRunningExample(benchmark::State& st) {
  const auto& seg = *example().lookup("seg").graph;
  for (auto _ : st) benchmark::DoNotOptimize(traverse("t.head", seg));
}
BENCHMARK(BM_TraverseRunningExample);

void BM_ConfigureLargestTree(benchmark::State& st) {
  auto& in = example();
  const auto& tree = in.lookup("trees").trees->back();
  for (auto _ : st)
    benchmark::DoNotOptimize(
        configure(tree, *in.lookup("agents").repository, "controller", "u", *in.lookup("simple").process));
}
BENCHMARK(BM_ConfigureLargestTree);

void BM_LivenessOfConfiguredLoop(benchmark::State& st) {
  const auto& l = *example().lookup("lconfig").local;
  for (auto _ : st) benchmark::DoNotOptimize(is_live(l, 100000));
}
BENCHMARK(BM_LivenessOfConfiguredLoop);

void BM_SupervisorScenario(benchmark::State& st) {
  auto& in = example();
  auto sc = parse_scenario(read_script("running_example.scenario"));
  for (auto _ : st)
    benchmark::DoNotOptimize(run_scenario(sc, *in.lookup("simple").process, *in.lookup("wdn").domain,
                                          *in.lookup("agents").repository));
}
BENCHMARK(BM_SupervisorScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
