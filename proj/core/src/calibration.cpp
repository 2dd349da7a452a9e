// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "nrl2sm/errors.hpp"
#include "nrl2sm/rng.hpp"

namespace nrl2sm {

namespace {

double clamp_bler(double b) {
    return std::clamp(b, kBlerLogFloor, 1.0 - kBlerLogFloor);
}

void check_ensemble(const CalibrationEnsemble& ensemble) {
    if (ensemble.realizations.size() < 2) {
        throw InvalidInputError("calibration needs >= 2 realizations, got " +
                                std::to_string(ensemble.realizations.size()));
    }
    if (!ensemble.awgn_ref) {
        throw InvalidInputError("calibration ensemble has no AWGN reference");
    }
    for (const auto& r : ensemble.realizations) {
        if (!(r.measured_bler > 0.0) || !(r.measured_bler <= 1.0)) {
            throw InvalidInputError(
                "measured_bler must be in (0,1], got " +
                std::to_string(r.measured_bler));
        }
    }
}

}  // namespace

double calibration_objective(double beta, const CalibrationEnsemble& ensemble,
                             int* clamped_count) {
    check_ensemble(ensemble);
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidInputError("calibration_objective: beta must be positive");
    }
    int clamped = 0;
    double acc = 0.0;
    for (const auto& r : ensemble.realizations) {
        const double eff = effective_sinr(r.spectrum, beta);
        const double eff_db = 10.0 * std::log10(eff);
        const double raw_ref = ensemble.awgn_ref(eff_db);
        const double ref = clamp_bler(raw_ref);
        if (ref != raw_ref) ++clamped;
        const double diff =
            std::log10(clamp_bler(r.measured_bler)) - std::log10(ref);
        acc += diff * diff;
    }
    if (clamped_count != nullptr) *clamped_count = clamped;
    return acc / static_cast<double>(ensemble.realizations.size());
}

CalibrationResult calibrate_beta(const CalibrationEnsemble& ensemble,
                                 const BetaSearch& search) {
    check_ensemble(ensemble);
    if (!(search.beta_min > 0.0) || !(search.beta_min < search.beta_max)) {
        throw InvalidInputError("calibrate_beta: need 0 < beta_min < beta_max");
    }
    if (!(search.tolerance > 0.0) || search.grid_points < 3) {
        throw InvalidInputError(
            "calibrate_beta: tolerance must be > 0 and grid_points >= 3");
    }

    CalibrationResult result;
    auto eval = [&](double beta) {
        const double obj = calibration_objective(beta, ensemble);
        result.search_trace.emplace_back(beta, obj);
        return obj;
    };

    // Coarse scan, log-spaced over [beta_min, beta_max].
    const int n = search.grid_points;
    const double log_min = std::log(search.beta_min);
    const double log_max = std::log(search.beta_max);
    std::vector<double> grid(n), obj(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = std::exp(log_min + (log_max - log_min) * i / (n - 1));
        obj[i] = eval(grid[i]);
    }

    int best = -1;
    double obj_min = std::numeric_limits<double>::infinity();
    double obj_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(obj[i])) continue;
        obj_min = std::min(obj_min, obj[i]);
        obj_max = std::max(obj_max, obj[i]);
        if (obj[i] < obj[best < 0 ? i : best] || best < 0) best = i;
    }
    if (best < 0) {
        throw CalibrationError(
            "calibrate_beta: objective non-finite across the whole range (" +
            std::to_string(n) + " grid points)");
    }
    result.at_boundary = (best == 0 || best == n - 1);
    result.beta_insensitive =
        (obj_max - obj_min) <= 1e-9 * std::max(1.0, std::abs(obj_max));

    // Golden-section refinement inside the bracketing grid cells.
    double a = grid[std::max(0, best - 1)];
    double b = grid[std::min(n - 1, best + 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > search.tolerance) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
    }

    // The reported optimum is the best point actually evaluated, so
    // objective_value is exactly the trace minimum.
    const auto it = std::min_element(
        result.search_trace.begin(), result.search_trace.end(),
        [](const auto& l, const auto& r) { return l.second < r.second; });
    result.beta_opt = it->first;
    result.objective_value = it->second;
    return result;
}

CalibrationEnsemble gen_fading_ensemble(
    const McsId& mcs, int n_channels, const std::vector<double>& noise_grid_db,
    const FadingParams& fading, const McsTableSet& tables,
    std::function<double(double)> ref, std::optional<double> planted_beta) {
    if (n_channels < 1) {
        throw GenerationError("gen_fading_ensemble: n_channels must be >= 1");
    }
    if (noise_grid_db.empty()) {
        throw GenerationError("gen_fading_ensemble: empty noise grid");
    }
    if (fading.n_rbs < 1 || fading.coherence_rbs < 1) {
        throw GenerationError(
            "gen_fading_ensemble: n_rbs and coherence_rbs must be >= 1");
    }

    const McsEntry& entry = tables.lookup(mcs);
    const double beta = planted_beta.value_or(entry.beta);
    if (!(beta > 0.0)) {
        throw GenerationError("gen_fading_ensemble: planted beta must be > 0");
    }
    if (!ref) {
        ref = make_awgn_ref_synth(entry);
    }

    CalibrationEnsemble ensemble;
    ensemble.mcs = mcs;
    ensemble.awgn_ref = ref;

    Pcg32 rng(fading.seed);
    const int n_blocks =
        (fading.n_rbs + fading.coherence_rbs - 1) / fading.coherence_rbs;

    for (int l = 0; l < n_channels; ++l) {
        // One unit-mean Rayleigh-power gain per coherence block.
        std::vector<double> gains(fading.n_rbs);
        for (int blk = 0; blk < n_blocks; ++blk) {
            const double g = -std::log(1.0 - rng.next_double());
            const int begin = blk * fading.coherence_rbs;
            const int end = std::min(fading.n_rbs, begin + fading.coherence_rbs);
            std::fill(gains.begin() + begin, gains.begin() + end, g);
        }
        for (double noise_db : noise_grid_db) {
            const double sigma2 = std::pow(10.0, noise_db / 10.0);
            CalibrationRealization r;
            r.noise_db = noise_db;
            r.spectrum.values.resize(gains.size());
            for (std::size_t i = 0; i < gains.size(); ++i) {
                r.spectrum.values[i] = gains[i] / sigma2;
            }
            const double eff = effective_sinr(r.spectrum, beta);
            r.measured_bler = ref(10.0 * std::log10(eff));
            if (r.measured_bler <= 0.0 || r.measured_bler >= 1.0) {
                ensemble.dropped_samples += 1;
                continue;
            }
            ensemble.realizations.push_back(std::move(r));
        }
    }
    return ensemble;
}

std::function<double(double)> make_awgn_ref_synth(const McsEntry& entry,
                                                  std::int64_t ref_cbs) {
    return [entry, ref_cbs](double sinr_db) {
        return synth_awgn_cbler(entry, entry.ecr, ref_cbs, sinr_db);
    };
}

std::function<double(double)> make_awgn_ref_lut(const BlerLut& lut,
                                                const McsId& mcs,
                                                std::int64_t ref_cbs) {
    const auto* list = lut.curves(mcs.table, mcs.index);
    if (list == nullptr || list->empty()) {
        throw MissingCurveError("make_awgn_ref_lut: no curves for " +
                                std::string(to_string(mcs.table)) + "/MCS" +
                                std::to_string(mcs.index));
    }
    const CbsCurve* curve = &list->front();
    for (const auto& c : *list) {
        if (c.cbs <= ref_cbs) curve = &c;
    }
    // Copy the points; the reference must outlive the LUT reference.
    std::vector<CbsCurve::Point> pts = curve->points;
    return [pts](double sinr_db) {
        if (sinr_db <= pts.front().sinr_db) return pts.front().bler;
        if (sinr_db >= pts.back().sinr_db) return pts.back().bler;
        auto hi = std::upper_bound(
            pts.begin(), pts.end(), sinr_db,
            [](double s, const CbsCurve::Point& p) { return s < p.sinr_db; });
        auto lo = std::prev(hi);
        const double t = (sinr_db - lo->sinr_db) / (hi->sinr_db - lo->sinr_db);
        // Linear in log10(BLER); zeros are floored to keep the log finite.
        const double la = std::log10(std::max(lo->bler, 1e-12));
        const double lb = std::log10(std::max(hi->bler, 1e-12));
        return std::pow(10.0, la + t * (lb - la));
    };
}

void save_ensemble(const CalibrationEnsemble& ensemble,
                   const std::string& path) {
    nlohmann::json reals = nlohmann::json::array();
    for (const auto& r : ensemble.realizations) {
        nlohmann::json sinr = nlohmann::json::array();
        for (double v : r.spectrum.values) {
            sinr.push_back(10.0 * std::log10(v));
        }
        nlohmann::json jr = {{"sinr_db", std::move(sinr)},
                             {"bler", r.measured_bler}};
        if (r.noise_db) jr["noise_db"] = *r.noise_db;
        reals.push_back(std::move(jr));
    }
    nlohmann::json doc = {
        {"mcs",
         {{"table_id", to_string(ensemble.mcs.table)},
          {"index", ensemble.mcs.index}}},
        {"realizations", std::move(reals)}};

    std::ofstream out(path);
    if (!out) {
        throw GenerationError("save_ensemble: cannot open " + path);
    }
    out << doc.dump(1) << "\n";
}

CalibrationEnsemble load_ensemble(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("load_ensemble: cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_ensemble: " + path + ": " + e.what());
    }

    CalibrationEnsemble ensemble;
    try {
        ensemble.mcs.table =
            mcs_table_from_string(doc.at("mcs").at("table_id").get<std::string>());
        ensemble.mcs.index = doc.at("mcs").at("index").get<int>();
        for (const auto& jr : doc.at("realizations")) {
            CalibrationRealization r;
            for (const auto& s : jr.at("sinr_db")) {
                r.spectrum.values.push_back(
                    std::pow(10.0, s.get<double>() / 10.0));
            }
            if (r.spectrum.values.empty()) {
                throw ParseError("realization with empty sinr_db");
            }
            r.measured_bler = jr.at("bler").get<double>();
            if (!(r.measured_bler > 0.0) || !(r.measured_bler <= 1.0)) {
                throw ParseError("bler outside (0,1]: " +
                                 std::to_string(r.measured_bler));
            }
            if (jr.contains("noise_db")) {
                r.noise_db = jr["noise_db"].get<double>();
            }
            ensemble.realizations.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_ensemble: " + path + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError("load_ensemble: " + path + ": " + e.what());
    }
    return ensemble;
}

}  // namespace nrl2sm
