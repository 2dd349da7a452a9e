// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot path: EESM compression, LUT lookup, full
// per-attempt error-model evaluation, and LDPC segmentation.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "nrl2sm/allocation.hpp"
#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/eesm.hpp"
#include "nrl2sm/error_model.hpp"
#include "nrl2sm/ldpc.hpp"
#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/rng.hpp"
#include "nrl2sm/sim.hpp"

namespace {

using namespace nrl2sm;

SinrSpectrum make_spectrum(int n_rbs, std::uint64_t seed) {
    Pcg32 rng(seed);
    SinrSpectrum s;
    s.values.reserve(static_cast<std::size_t>(n_rbs));
    for (int i = 0; i < n_rbs; ++i) {
        // Linear SINRs spanning roughly 0..30 dB.
        s.values.push_back(1.0 + 999.0 * rng.next_double());
    }
    return s;
}

const BlerLut& bench_lut() {
    static const BlerLut lut = generate_synthetic_lut(
        McsTableSet::builtin(), default_cbs_grid(), default_sinr_grid_db(), 0);
    return lut;
}

void BM_EffectiveSinr(benchmark::State& state) {
    const SinrSpectrum s = make_spectrum(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(effective_sinr(s, 1.6));
    }
}
BENCHMARK(BM_EffectiveSinr)->Arg(12)->Arg(132);

void BM_EffectiveSinrCc(benchmark::State& state) {
    const McsTableSet& tables = McsTableSet::builtin();
    const SinrSpectrum first = make_spectrum(132, 7);
    const SinrSpectrum second = make_spectrum(132, 8);
    const double beta = tables.lookup(McsTableId::Table2, 7).beta;
    HarqHistory history;
    history.method = HarqMethod::ChaseComb;
    update_history(history, first, beta, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(effective_sinr_cc(history, second, beta));
    }
}
BENCHMARK(BM_EffectiveSinrCc);

void BM_LookupCbler(benchmark::State& state) {
    const BlerLut& lut = bench_lut();
    double sinr = -9.7;
    for (auto _ : state) {
        sinr += 0.37;
        if (sinr > 40.0) sinr = -9.7;
        benchmark::DoNotOptimize(
            lookup_cbler(lut, McsTableId::Table2, 7, 3000, sinr));
    }
}
BENCHMARK(BM_LookupCbler);

void BM_ComputeTbler(benchmark::State& state) {
    const McsTableSet& tables = McsTableSet::builtin();
    const BlerLut& lut = bench_lut();
    const McsId mcs{McsTableId::Table2, 7};
    const SinrSpectrum s = make_spectrum(132, 7);
    const std::int64_t tbs =
        tbs_calculate(132, 12, tables.lookup(mcs.table, mcs.index));
    const HarqHistory history;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            compute_tbler(s, mcs, tbs, history, lut, tables));
    }
}
BENCHMARK(BM_ComputeTbler);

void BM_Segment(benchmark::State& state) {
    std::int64_t tbs = 100;
    for (auto _ : state) {
        tbs = tbs * 7 % 499979 + 24;
        benchmark::DoNotOptimize(segment(tbs, BaseGraph::BG1));
    }
}
BENCHMARK(BM_Segment);

}  // namespace

BENCHMARK_MAIN();
