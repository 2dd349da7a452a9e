// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/eesm.hpp"
#include "nrl2sm/ldpc.hpp"
#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/rational.hpp"
#include "nrl2sm/rng.hpp"

namespace nrl2sm {

// How the lookup handles an IR effective code rate below the nominal rate
// of the MCS. The LUT is keyed by MCS, not by rate, so the rate reduction
// has to enter the lookup somehow; this is the main modeling seam.
enum class IrEcrMode {
    // Pick by LUT provenance: synthetic generators use SinrOffset, loaded
    // link-level data uses CurveReselect.
    Auto,
    // Shift the lookup SINR up by 10*log10(R/ecr_eff)*Qm/2 dB.
    SinrOffset,
    // Look up the same-modulation MCS whose nominal rate is closest to
    // ecr_eff from above-floor range (largest nominal rate <= ecr_eff).
    CurveReselect,
};

const char* to_string(IrEcrMode m);
IrEcrMode ir_ecr_mode_from_string(const std::string& s);

struct CombineOptions {
    IrEcrMode ir_ecr_mode = IrEcrMode::Auto;
    // Coded bits of the current attempt (N_RE * Qm, supplied by the
    // scheduler). Required for IR once the history is non-empty; the
    // error model never infers allocation sizes.
    std::uint64_t coded_bits_current = 0;
};

struct L2smOutput {
    double sinr_eff = 0.0;     // linear
    double sinr_eff_db = 0.0;
    Rational ecr_eff{0, 1};    // after combining and clamping
    BaseGraph base_graph = BaseGraph::BG1;
    std::int64_t num_code_blocks = 1;
    std::int64_t cbs = 0;
    double cbler = 1.0;
    double tbler = 1.0;
    LookupFlags lookup_flags;
};

// The full SINR-vector-to-transport-BLER pipeline: effective SINR per the
// history's combining method, effective code rate, base-graph selection
// and segmentation on the nominal rate, worst-case curve lookup, and
// code-to-transport BLER composition. Pure and deterministic.
// `history` holds the past attempts only; `sinrs` is the current one.
// Throws CombiningError when the history's MCS differs from `mcs`.
L2smOutput compute_tbler(const SinrSpectrum& sinrs, const McsId& mcs,
                         std::int64_t tbs, const HarqHistory& history,
                         const BlerLut& lut, const McsTableSet& tables,
                         const CombineOptions& options = {});

// One Bernoulli decode outcome: true (success) with probability 1-tbler.
// Advances the generator exactly one double draw.
bool draw_decode(double tbler, Pcg32& rng);

}  // namespace nrl2sm
