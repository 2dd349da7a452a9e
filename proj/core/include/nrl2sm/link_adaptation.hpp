// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "nrl2sm/allocation.hpp"
#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/eesm.hpp"
#include "nrl2sm/error_model.hpp"
#include "nrl2sm/mcs_tables.hpp"

namespace nrl2sm {

enum class LinkAdaptPolicy { ErrorModel, Shannon };

const char* to_string(LinkAdaptPolicy p);
LinkAdaptPolicy link_adapt_policy_from_string(const std::string& s);

// SNR gap of the Shannon-bound policy: -ln(5e-5)/0.5.
inline const double kShannonGamma = -std::log(5e-5) / 0.5;

// Hypothetical transport block over which candidate MCSs are evaluated.
// n_rbs 0 means "full band": use the reported spectrum's RB count.
struct CsiReference {
    int n_rbs = 0;
    int n_symbols = 12;  // includes the DMRS symbol tbs_calculate removes
};

struct LinkAdaptResult {
    McsTableId table = McsTableId::Table1;
    int mcs_index = 0;
    LinkAdaptPolicy policy = LinkAdaptPolicy::ErrorModel;
    // Filled by the policy that produced the result; NaN otherwise.
    double predicted_tbler = std::nan("");  // error-model policy
    double achievable_se = std::nan("");    // Shannon policy
    int cqi = 0;
    // No MCS qualified; mcs_index holds the lowest index as the fallback.
    bool out_of_range = false;
};

struct LinkAdaptOptions {
    // Evaluate every index and take the maximum qualifying one instead of
    // stopping at the first hit of the descending scan. Same result on
    // any data (the first qualifying index from the top IS the maximum);
    // kept as a cross-check mode.
    bool strict_full_scan = false;
};

// Highest MCS whose predicted first-transmission transport BLER over the
// CSI reference resource stays within target_tbler. Scans indices
// descending and evaluates the full pipeline (no HARQ history) for each.
LinkAdaptResult select_mcs_error_model(const SinrSpectrum& sinrs,
                                       McsTableId table, double target_tbler,
                                       const BlerLut& lut,
                                       const McsTableSet& tables,
                                       const CsiReference& csi_ref = {},
                                       const LinkAdaptOptions& options = {});

// Highest MCS whose table spectral efficiency lies strictly below the
// mean per-RB achievable SE log2(1 + SINR/Gamma).
LinkAdaptResult select_mcs_shannon(const SinrSpectrum& sinrs, McsTableId table,
                                   const McsTableSet& tables);

// CQI for a selection result: 0 when out of range, otherwise the
// table-driven quantization of the selected MCS.
int report_cqi(const LinkAdaptResult& result, const McsTableSet& tables);

}  // namespace nrl2sm
