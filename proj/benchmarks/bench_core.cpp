#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qclab/diffraction.hpp"
#include "qclab/exponential_sum.hpp"
#include "qclab/zero_finder.hpp"

namespace {

using namespace qclab;

const ToleranceConfig cfg;

// n terms with pairwise distinct irrational-spaced frequencies, so products
// exercise the merge path without collapsing terms.
ExponentialSum dense_series(int n, double spread) {
    std::vector<Term> terms;
    terms.reserve(static_cast<std::size_t>(n));
    double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int j = 0; j < n; ++j) {
        double omega = spread * phi * static_cast<double>(j + 1);
        double amp = 0.5 / static_cast<double>(n);
        terms.push_back({omega, Complex(amp * std::cos(j), amp * std::sin(j))});
    }
    return ExponentialSum::normalized(std::move(terms), cfg);
}

ExponentialSum comb_product(int factors) {
    auto q = ExponentialSum::normalized({{0.0, -1.0}, {1.0, 1.0}}, cfg);
    auto out = q;
    for (int j = 1; j < factors; ++j) {
        double scale = 1.0 / std::sqrt(static_cast<double>(j) + 1.0);
        auto factor = ExponentialSum::normalized({{0.0, -1.0}, {scale, 1.0}}, cfg);
        out = mul(out, factor, cfg);
    }
    return out;
}

void BM_mul(benchmark::State& state) {
    auto p = dense_series(static_cast<int>(state.range(0)), 1.0);
    auto q = dense_series(static_cast<int>(state.range(0)), std::sqrt(2.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mul(p, q, cfg));
    }
}
BENCHMARK(BM_mul)->Arg(16)->Arg(64)->Arg(256);

void BM_exp_sum(benchmark::State& state) {
    auto h = dense_series(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp_sum(h, cfg));
    }
}
BENCHMARK(BM_exp_sum)->Arg(8)->Arg(32)->Arg(128);

void BM_diffraction_spectrum(benchmark::State& state) {
    auto q = comb_product(static_cast<int>(state.range(0)));
    double s = select_height(q, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffraction_spectrum(q, s, 6.0, cfg));
    }
}
BENCHMARK(BM_diffraction_spectrum)->Arg(1)->Arg(2)->Arg(3);

void BM_find_real_zeros(benchmark::State& state) {
    auto q = comb_product(static_cast<int>(state.range(0)));
    double s = select_height(q, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_real_zeros(q, {-10.2, 10.2}, s, cfg));
    }
}
BENCHMARK(BM_find_real_zeros)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
