// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/eesm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

namespace {

void check_spectrum(const SinrSpectrum& sinrs, const char* who) {
    if (sinrs.values.empty()) {
        throw InvalidInputError(std::string(who) + ": empty SINR spectrum");
    }
    if (!sinrs.rb_ids.empty() && sinrs.rb_ids.size() != sinrs.values.size()) {
        throw InvalidInputError(std::string(who) +
                                ": rb_ids/values length mismatch");
    }
    for (double v : sinrs.values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInputError(std::string(who) +
                                    ": SINR values must be finite and >= 0, got " +
                                    std::to_string(v));
        }
    }
}

void check_beta(double beta, const char* who) {
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw InvalidInputError(std::string(who) +
                                ": beta must be positive, got " +
                                std::to_string(beta));
    }
}

// -beta * ln(mean of exp(-s/beta)) with the smallest s factored out so the
// dominant exponential is exactly 1. Without the shift exp(-s/beta)
// underflows to 0 once s/beta > ~745 (beta 1.60 with 40 dB SINRs already
// qualifies) and the mean collapses to 0.
double exp_average(const double* s, std::size_t n, double beta) {
    double s_min = s[0];
    for (std::size_t i = 1; i < n; ++i) s_min = std::min(s_min, s[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::exp(-(s[i] - s_min) / beta);
    }
    return s_min - beta * std::log(acc / static_cast<double>(n));
}

}  // namespace

const char* to_string(HarqMethod m) {
    switch (m) {
        case HarqMethod::None: return "none";
        case HarqMethod::ChaseComb: return "cc";
        case HarqMethod::IncrRedund: return "ir";
    }
    throw InvalidInputError("unknown HarqMethod");
}

HarqMethod harq_method_from_string(const std::string& s) {
    if (s == "none" || s == "off") return HarqMethod::None;
    if (s == "cc") return HarqMethod::ChaseComb;
    if (s == "ir") return HarqMethod::IncrRedund;
    throw ParseError("unknown HARQ method '" + s + "' (expected off|cc|ir)");
}

std::uint64_t HarqHistory::total_coded_bits() const {
    std::uint64_t total = 0;
    for (const auto& a : ir_attempts) total += a.coded_bits;
    return total;
}

double effective_sinr(const SinrSpectrum& sinrs, double beta) {
    check_spectrum(sinrs, "effective_sinr");
    check_beta(beta, "effective_sinr");
    return exp_average(sinrs.values.data(), sinrs.values.size(), beta);
}

double effective_sinr_cc(const HarqHistory& history,
                         const SinrSpectrum& current, double beta) {
    if (history.method != HarqMethod::ChaseComb) {
        throw CombiningError("effective_sinr_cc: history method is not cc");
    }
    check_spectrum(current, "effective_sinr_cc");
    check_beta(beta, "effective_sinr_cc");
    if (history.empty()) {
        return exp_average(current.values.data(), current.values.size(), beta);
    }
    if (current.size() != history.accumulated.size()) {
        throw CombiningError("effective_sinr_cc: RB count mismatch (history " +
                             std::to_string(history.accumulated.size()) +
                             ", current " + std::to_string(current.size()) + ")");
    }
    std::vector<double> summed(current.size());
    for (std::size_t i = 0; i < summed.size(); ++i) {
        summed[i] = history.accumulated[i] + current.values[i];
    }
    return exp_average(summed.data(), summed.size(), beta);
}

double effective_sinr_ir(const HarqHistory& history,
                         const SinrSpectrum& current, double beta) {
    if (history.method != HarqMethod::IncrRedund) {
        throw CombiningError("effective_sinr_ir: history method is not ir");
    }
    check_spectrum(current, "effective_sinr_ir");
    check_beta(beta, "effective_sinr_ir");
    if (history.empty()) {
        return exp_average(current.values.data(), current.values.size(), beta);
    }
    if (current.size() != history.rb_count) {
        throw CombiningError("effective_sinr_ir: RB count mismatch (history " +
                             std::to_string(history.rb_count) + ", current " +
                             std::to_string(current.size()) + ")");
    }
    // Every attempt j satisfies
    //   exp(-sinr_eff_j/beta) = (1/|w|) sum_m exp(-SINR_{m,j}/beta),
    // so with the RB count fixed across attempts the double sum over
    // (m, j) collapses to a plain exponential average over the q
    // per-attempt effective SINRs. Exact, not an approximation.
    std::vector<double> effs;
    effs.reserve(history.ir_attempts.size() + 1);
    for (const auto& a : history.ir_attempts) {
        if (!std::isfinite(a.sinr_eff) || a.sinr_eff < 0.0) {
            throw CombiningError("effective_sinr_ir: invalid stored sinr_eff");
        }
        effs.push_back(a.sinr_eff);
    }
    effs.push_back(exp_average(current.values.data(), current.values.size(), beta));
    return exp_average(effs.data(), effs.size(), beta);
}

Rational effective_ecr(std::uint64_t info_bits,
                       const std::vector<std::uint64_t>& coded_bits) {
    if (info_bits == 0) {
        throw InvalidInputError("effective_ecr: info_bits must be > 0");
    }
    if (coded_bits.empty()) {
        throw InvalidInputError("effective_ecr: empty coded_bits list");
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : coded_bits) {
        if (c == 0) {
            throw InvalidInputError("effective_ecr: coded_bits entries must be > 0");
        }
        total += c;
    }
    return Rational(static_cast<std::int64_t>(info_bits),
                    static_cast<std::int64_t>(total));
}

Rational clamp_ecr_ir(const Rational& ecr_eff, const McsEntry& mcs,
                      const McsTableSet& tables) {
    const Rational floor =
        tables.min_ecr_same_modulation(McsId{mcs.table_id, mcs.index});
    return max(ecr_eff, floor);
}

HarqHistory update_history(const HarqHistory& history,
                           const SinrSpectrum& current, double beta,
                           std::uint64_t coded_bits) {
    check_spectrum(current, "update_history");
    HarqHistory next = history;

    if (next.empty()) {
        next.rb_count = current.size();
    } else if (current.size() != next.rb_count) {
        throw CombiningError("update_history: RB count mismatch (history " +
                             std::to_string(next.rb_count) + ", current " +
                             std::to_string(current.size()) + ")");
    }

    switch (next.method) {
        case HarqMethod::ChaseComb:
            if (next.accumulated.empty()) {
                next.accumulated = current.values;
            } else {
                for (std::size_t i = 0; i < next.accumulated.size(); ++i) {
                    next.accumulated[i] += current.values[i];
                }
            }
            break;
        case HarqMethod::IncrRedund: {
            check_beta(beta, "update_history");
            if (coded_bits == 0) {
                throw CombiningError(
                    "update_history: ir attempt with zero coded_bits");
            }
            const double eff =
                exp_average(current.values.data(), current.values.size(), beta);
            next.ir_attempts.push_back({eff, coded_bits});
            break;
        }
        case HarqMethod::None:
            break;
    }

    if (next.retain_raw) {
        next.raw_attempts.push_back(current);
    }
    next.attempts += 1;
    return next;
}

}  // namespace nrl2sm
