#include <benchmark/benchmark.h>

#include "streambank/cost_model.hpp"
#include "streambank/incremental_sampler.hpp"
#include "streambank/memory_bank.hpp"
#include "streambank/reducer.hpp"
#include "streambank/synthetic.hpp"

using namespace streambank;

static void BM_TruncatedSvd(benchmark::State& state) {
  const Index m = state.range(0), n = state.range(1), k = state.range(2);
  const Matrix x = synthetic::gaussian(m, n, 1);
  for (auto _ : state) {
    auto svd = truncated_svd(x, k);
    benchmark::DoNotOptimize(svd.s.data());
  }
}
BENCHMARK(BM_TruncatedSvd)->Args({64, 256, 16})->Args({256, 256, 32})->Args({1024, 784, 128});

static void BM_ReducerStream(benchmark::State& state) {
  const Index m = state.range(0), n = 4096, nb = state.range(1), k = state.range(2);
  const Matrix x = synthetic::gaussian(m, n, 2);
  for (auto _ : state) {
    IncrementalReducer r(ReducerConfig{k, nb, Precision::f64});
    for (Index s = 0; s < n; s += nb) r.ingest_batch(x.middleCols(s, nb));
    auto f = r.finalize();
    benchmark::DoNotOptimize(f.basis.u.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReducerStream)->Args({64, 256, 8})->Args({256, 512, 32})->Args({256, 4096, 32})->Unit(benchmark::kMillisecond);

// Wall time next to the exact comparison count, batchless vs every-batch.
static void BM_Sampling(benchmark::State& state) {
  const Index n = state.range(0), b = state.range(1);
  const bool incremental = b < n;
  const SamplingRate rate = SamplingRate::fraction(1, 100);
  const Matrix x = synthetic::gaussian(16, n, 3);
  std::uint64_t comparisons = 0;
  for (auto _ : state) {
    if (incremental) {
      IncrementalSampler s(IncrementalSamplerConfig{rate, b, BufferPolicy::every_batch()});
      for (Index i = 0; i < n; i += b) s.observe_batch(x.middleCols(i, b));
      comparisons = s.flush().counter.greedy_comparisons;
    } else {
      comparisons = greedy_sample(x, CoresetConfig::rate(rate)).counter.greedy_comparisons;
    }
  }
  state.counters["comparisons"] = static_cast<double>(comparisons);
  state.counters["predicted"] = static_cast<double>(
      incremental ? predict_incremental_sum(CostQuery{n, b, rate}) : predict_batchless(CostQuery{n, n, rate}));
}
BENCHMARK(BM_Sampling)->Args({10000, 10000})->Args({10000, 100})->Args({40000, 40000})->Args({40000, 400})
    ->Unit(benchmark::kMillisecond);

static void BM_Score(benchmark::State& state) {
  const Index m = 256, k = 32, bank_size = state.range(0), q = 784;
  const FinalBasis basis{synthetic::orthonormal(m, k, 4), Vector::Ones(k)};
  const MemoryBank bank(basis, synthetic::gaussian(k, bank_size, 5),
                        BankMeta{k, m, Precision::f64, 1, 1.0, "all", bank_size});
  const Matrix queries = synthetic::gaussian(m, q, 6);
  for (auto _ : state) {
    auto r = score(bank, queries);
    benchmark::DoNotOptimize(r.image_score);
  }
  state.SetItemsProcessed(state.iterations() * q);
}
BENCHMARK(BM_Score)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
