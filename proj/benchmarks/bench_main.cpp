#include <benchmark/benchmark.h>

#include "secrelay/analytic.hpp"
#include "secrelay/asymptotic.hpp"
#include "secrelay/model.hpp"
#include "secrelay/montecarlo.hpp"
#include "secrelay/oracle.hpp"

namespace {

using namespace secrelay;

void BM_OutageNoDirect(benchmark::State& state) {
  const auto params = ChannelParams::no_direct(
      db_to_linear(15.0), db_to_linear(15.0), static_cast<int>(state.range(0)));
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(outage_no_direct(rate, params).value());
  }
}
BENCHMARK(BM_OutageNoDirect)->Arg(4)->Arg(64);

void BM_OutageWithDirect(benchmark::State& state) {
  const auto params = ChannelParams::with_direct(
      db_to_linear(5.0), db_to_linear(5.0), db_to_linear(15.0),
      db_to_linear(15.0), static_cast<int>(state.range(0)));
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(outage_with_direct(rate, params).value());
  }
}
BENCHMARK(BM_OutageWithDirect)->Arg(4)->Arg(64);

void BM_QuadratureOracle(benchmark::State& state) {
  const auto params = ChannelParams::with_direct(
      db_to_linear(5.0), db_to_linear(5.0), db_to_linear(15.0),
      db_to_linear(15.0), static_cast<int>(state.range(0)));
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quadrature_outage_with_direct(rate, params).value());
  }
}
BENCHMARK(BM_QuadratureOracle)->Arg(1)->Arg(8);

void BM_DrawLinks(benchmark::State& state) {
  const auto params = ChannelParams::with_direct(
      1.0, 1.0, 10.0, 10.0, static_cast<int>(state.range(0)));
  const CounterRng rng(42);
  LinkDraw draw;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    draw_links_into(draw, params, rng, trial++);
    benchmark::DoNotOptimize(draw.gamma_rd.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          (2 + 2 * state.range(0)));
}
BENCHMARK(BM_DrawLinks)->Arg(2)->Arg(8);

void BM_EstimateOutage(benchmark::State& state) {
  const auto params = ChannelParams::no_direct(db_to_linear(15.0),
                                               db_to_linear(15.0), 4);
  const SecrecyRate rate = SecrecyRate::from_nats(0.3);
  const McConfig cfg{static_cast<std::uint64_t>(state.range(0)), 42, 8, 0.95};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_outage(params, rate, cfg).p_hat);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_EstimateOutage)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
