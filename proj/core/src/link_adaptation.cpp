// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/link_adaptation.hpp"

#include <cmath>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

const char* to_string(LinkAdaptPolicy p) {
    switch (p) {
        case LinkAdaptPolicy::ErrorModel: return "error-model";
        case LinkAdaptPolicy::Shannon: return "shannon";
    }
    throw InvalidInputError("unknown LinkAdaptPolicy");
}

LinkAdaptPolicy link_adapt_policy_from_string(const std::string& s) {
    if (s == "error-model") return LinkAdaptPolicy::ErrorModel;
    if (s == "shannon") return LinkAdaptPolicy::Shannon;
    throw ParseError("unknown link adaptation policy '" + s +
                     "' (expected error-model|shannon)");
}

LinkAdaptResult select_mcs_error_model(const SinrSpectrum& sinrs,
                                       McsTableId table, double target_tbler,
                                       const BlerLut& lut,
                                       const McsTableSet& tables,
                                       const CsiReference& csi_ref,
                                       const LinkAdaptOptions& options) {
    if (sinrs.values.empty()) {
        throw InvalidInputError("select_mcs_error_model: empty spectrum");
    }
    if (!(target_tbler > 0.0) || !(target_tbler < 1.0)) {
        throw InvalidInputError(
            "select_mcs_error_model: target_tbler must be in (0,1)");
    }
    const int n_rbs =
        csi_ref.n_rbs > 0 ? csi_ref.n_rbs : static_cast<int>(sinrs.size());

    LinkAdaptResult result;
    result.table = table;
    result.policy = LinkAdaptPolicy::ErrorModel;

    const HarqHistory no_history{};
    auto predict = [&](int idx) {
        const McsId mcs{table, idx};
        const std::int64_t tbs =
            tbs_calculate(n_rbs, csi_ref.n_symbols, tables.lookup(mcs));
        return compute_tbler(sinrs, mcs, tbs, no_history, lut, tables).tbler;
    };

    int selected = -1;
    double selected_tbler = 1.0;
    if (options.strict_full_scan) {
        for (int idx = 0; idx <= tables.max_index(table); ++idx) {
            const double tbler = predict(idx);
            if (tbler <= target_tbler) {
                selected = idx;
                selected_tbler = tbler;
            }
        }
    } else {
        for (int idx = tables.max_index(table); idx >= 0; --idx) {
            const double tbler = predict(idx);
            if (tbler <= target_tbler) {
                selected = idx;
                selected_tbler = tbler;
                break;
            }
        }
    }

    if (selected < 0) {
        result.mcs_index = 0;
        result.predicted_tbler = predict(0);
        result.out_of_range = true;
    } else {
        result.mcs_index = selected;
        result.predicted_tbler = selected_tbler;
    }
    result.cqi = report_cqi(result, tables);
    return result;
}

LinkAdaptResult select_mcs_shannon(const SinrSpectrum& sinrs, McsTableId table,
                                   const McsTableSet& tables) {
    if (sinrs.values.empty()) {
        throw InvalidInputError("select_mcs_shannon: empty spectrum");
    }
    double se_sum = 0.0;
    for (double s : sinrs.values) {
        if (!std::isfinite(s) || s < 0.0) {
            throw InvalidInputError(
                "select_mcs_shannon: SINR values must be finite and >= 0");
        }
        se_sum += std::log2(1.0 + s / kShannonGamma);
    }
    const double mean_se = se_sum / static_cast<double>(sinrs.size());

    LinkAdaptResult result;
    result.table = table;
    result.policy = LinkAdaptPolicy::Shannon;
    result.achievable_se = mean_se;

    int selected = -1;
    for (int idx = tables.max_index(table); idx >= 0; --idx) {
        if (tables.lookup(McsId{table, idx}).spectral_efficiency < mean_se) {
            selected = idx;
            break;
        }
    }
    if (selected < 0) {
        result.mcs_index = 0;
        result.out_of_range = true;
    } else {
        result.mcs_index = selected;
    }
    result.cqi = report_cqi(result, tables);
    return result;
}

int report_cqi(const LinkAdaptResult& result, const McsTableSet& tables) {
    if (result.out_of_range) return 0;
    return tables.quantize_cqi(McsId{result.table, result.mcs_index});
}

}  // namespace nrl2sm
