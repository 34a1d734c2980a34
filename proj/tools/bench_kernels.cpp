#include <benchmark/benchmark.h>

#include <random>

#include "inertia/kernels.hpp"

// Parallel kernels against their serial references on a fit-sized system:
// one year of half-hourly periods, a 50-plant fleet plus the demand column.

namespace {

using inertia::kernels::GramSystem;
using inertia::linalg::Matrix;

struct Fixture {
  Matrix x;
  std::vector<double> y;
  std::vector<double> w;
  std::vector<std::int8_t> indicators;
  std::size_t n_plants;

  Fixture(std::size_t rows, std::size_t cols) : x(rows, cols), n_plants(cols - 1) {
    std::mt19937_64 rng(7);
    auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c + 1 < cols; ++c) x(r, c) = unit() < 0.6 ? 1.0 : 0.0;
      x(r, cols - 1) = 20.0 + 25.0 * unit();
    }
    y.resize(rows);
    for (auto& v : y) v = 150.0 + 100.0 * unit();
    w.assign(cols, 1.0);
    indicators.resize(rows * n_plants);
    for (std::size_t i = 0; i < indicators.size(); ++i) {
      indicators[i] = x.data[(i / n_plants) * cols + i % n_plants] != 0.0;
    }
  }
};

const Fixture& fixture() {
  static Fixture f(17520, 51);
  return f;
}

void BM_gram_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto gs = inertia::kernels::ref::gram(f.x, f.y);
    benchmark::DoNotOptimize(gs.yty);
  }
}

void BM_gram_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto gs = inertia::kernels::gram(f.x, f.y);
    benchmark::DoNotOptimize(gs.yty);
  }
}

void BM_residual_sse_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(inertia::kernels::ref::residual_sse(f.x, f.y, f.w));
  }
}

void BM_residual_sse_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(inertia::kernels::residual_sse(f.x, f.y, f.w));
  }
}

void BM_agreement_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto counts =
        inertia::kernels::ref::pairwise_agreement(f.indicators.data(), f.x.rows, f.n_plants);
    benchmark::DoNotOptimize(counts.data());
  }
}

void BM_agreement_omp(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) {
    auto counts =
        inertia::kernels::pairwise_agreement(f.indicators.data(), f.x.rows, f.n_plants);
    benchmark::DoNotOptimize(counts.data());
  }
}

BENCHMARK(BM_gram_serial);
BENCHMARK(BM_gram_omp);
BENCHMARK(BM_residual_sse_serial);
BENCHMARK(BM_residual_sse_omp);
BENCHMARK(BM_agreement_serial);
BENCHMARK(BM_agreement_omp);

}  // namespace

BENCHMARK_MAIN();
