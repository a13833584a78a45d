#include <benchmark/benchmark.h>

#include <array>
#include <string>

#include "pktgraph/lattice_count.hpp"
#include "pktgraph/packet_dynamics.hpp"
#include "pktgraph/serialization.hpp"

using namespace pktgraph;

namespace {

MetricGraph theta() { return build_graph(load_graph_spec(std::string(PKTGRAPH_GRAPH_DIR) + "/theta_sqrt.json")); }

InitialCondition start(const MetricGraph& g) {
  InitialCondition init;
  init.edge = 0;
  init.offset = scale(g.edge(0).travel_time, Rational(1, 2));
  init.direction = Direction::Forward;
  return init;
}

void BM_SimulateTheta(benchmark::State& state) {
  const auto g = theta();
  const auto init = start(g);
  const auto horizon = EventTime::symbol(g.basis(), 0, state.range(0));
  std::size_t records = 0;
  for (auto _ : state) {
    const auto log = simulate(g, init, horizon);
    records = log.size();
    benchmark::DoNotOptimize(records);
  }
  state.counters["records"] = static_cast<double>(records);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records));
}
BENCHMARK(BM_SimulateTheta)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PacketCount(benchmark::State& state) {
  const auto g = theta();
  const auto log = simulate(g, start(g), EventTime::symbol(g.basis(), 0, 150));
  const auto t = EventTime::symbol(g.basis(), 0, Rational(2803, 20));
  for (auto _ : state) benchmark::DoNotOptimize(log.packet_count(t));
}
BENCHMARK(BM_PacketCount);

void BM_EventTimeCompare(benchmark::State& state) {
  const auto g = theta();
  const auto& b = g.basis();
  const auto x = EventTime::symbol(b, 0, 17) + EventTime::symbol(b, 1, 5) + EventTime::symbol(b, 2, Rational(3, 2));
  const auto y = EventTime::symbol(b, 0, 9) + EventTime::symbol(b, 1, 11) + EventTime::symbol(b, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(compare(x, y));
}
BENCHMARK(BM_EventTimeCompare);

void BM_SimplexCount(benchmark::State& state) {
  const std::array<double, 3> times{1.0, 1.4142135623730951, 1.7320508075688772};
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simplex_count(times, T));
}
BENCHMARK(BM_SimplexCount)->Arg(50)->Arg(100)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
