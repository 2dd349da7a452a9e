// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/eesm.hpp"
#include "nrl2sm/mcs_tables.hpp"

namespace nrl2sm {

// One fading realization at one noise level: the per-RB linear SINRs it
// produced and the block error rate measured for it.
struct CalibrationRealization {
    SinrSpectrum spectrum;
    double measured_bler = 0.0;            // in (0, 1]
    std::optional<double> noise_db;        // diagnostic, carried if known
};

struct CalibrationEnsemble {
    std::vector<CalibrationRealization> realizations;
    McsId mcs{McsTableId::Table1, 0};
    // Monotone non-increasing SINR_db -> BLER reference; continuous
    // interpolation, not the worst-case lookup step (plateaus would blind
    // the optimizer).
    std::function<double(double)> awgn_ref;
    // Realizations discarded at generation because their measured BLER
    // saturated at exactly 0 or 1 (log-domain objective undefined there).
    std::uint32_t dropped_samples = 0;
};

struct CalibrationResult {
    double beta_opt = 0.0;
    double objective_value = 0.0;
    std::vector<std::pair<double, double>> search_trace;  // (beta, objective)
    // Objective flat over the whole search range (e.g. flat-fading
    // ensembles, where the effective SINR is beta-independent).
    bool beta_insensitive = false;
    // Grid minimum sat on a search boundary; the true optimum may lie
    // outside [beta_min, beta_max].
    bool at_boundary = false;
};

struct BetaSearch {
    double beta_min = 0.1;
    double beta_max = 300.0;
    double tolerance = 1e-3;  // absolute width of the final bracket
    int grid_points = 64;     // log-spaced coarse scan
};

inline constexpr double kBlerLogFloor = 1e-8;  // clamp inside log10

// Mean squared log10-BLER mismatch between measured values and the AWGN
// reference evaluated at the beta-parameterized effective SINR. BLER
// values are clamped to [1e-8, 1-1e-8] before the logs; when
// `clamped_count` is given it receives the number of clamped reference
// evaluations.
double calibration_objective(double beta, const CalibrationEnsemble& ensemble,
                             int* clamped_count = nullptr);

// Coarse log-spaced grid scan plus golden-section refinement around the
// grid minimum. Deterministic; every evaluation lands in search_trace and
// objective_value is their minimum. Throws CalibrationError when the
// objective is non-finite over the entire range.
CalibrationResult calibrate_beta(const CalibrationEnsemble& ensemble,
                                 const BetaSearch& search = {});

struct FadingParams {
    int n_rbs = 0;
    int coherence_rbs = 1;  // RBs sharing one fading block
    std::uint64_t seed = 0;
};

// Synthetic calibration ensemble: per-RB unit-mean exponential
// (Rayleigh-power) gains, block-correlated over coherence_rbs, scaled by
// each noise level; realizations form the full (channel x noise) cross
// product, channel draws shared across noise levels. Measured BLER comes
// from `ref` evaluated at the planted-beta effective SINR, so
// calibrate_beta against the same reference should recover planted_beta.
// Samples whose measured BLER saturates at 0 or 1 are dropped and
// counted. When planted_beta is omitted the table's published beta for
// `mcs` is used.
CalibrationEnsemble gen_fading_ensemble(
    const McsId& mcs, int n_channels, const std::vector<double>& noise_grid_db,
    const FadingParams& fading, const McsTableSet& tables,
    std::function<double(double)> ref = nullptr,
    std::optional<double> planted_beta = std::nullopt);

// AWGN reference builders. The synthetic one is the parametric waterfall
// at a fixed representative code block size; the LUT one interpolates
// log10(BLER) linearly in SINR between stored points of the matching
// curve (largest stored cbs <= ref_cbs).
std::function<double(double)> make_awgn_ref_synth(const McsEntry& entry,
                                                  std::int64_t ref_cbs = 3840);
std::function<double(double)> make_awgn_ref_lut(const BlerLut& lut,
                                                const McsId& mcs,
                                                std::int64_t ref_cbs = 3840);

// Ensemble persistence: {mcs:{table_id,index}, realizations:[{sinr_db:[...],
// bler, noise_db?}]}. SINRs stored in dB. awgn_ref is not persisted; the
// loader leaves it unset for the caller to attach.
void save_ensemble(const CalibrationEnsemble& ensemble, const std::string& path);
CalibrationEnsemble load_ensemble(const std::string& path);

}  // namespace nrl2sm
