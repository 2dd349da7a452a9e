// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/rational.hpp"

namespace nrl2sm {

// Per-RB post-equalization SINR values, linear scale. rb_ids are optional
// labels carried through for diagnostics; when present they must match
// values in length.
struct SinrSpectrum {
    std::vector<double> values;
    std::vector<std::uint32_t> rb_ids;

    std::size_t size() const { return values.size(); }
};

enum class HarqMethod {
    None,        // single shot, no combining
    ChaseComb,   // retransmissions carry identical bits; SINRs add per RB
    IncrRedund,  // retransmissions carry new parity; exponential terms pool
};

const char* to_string(HarqMethod m);
HarqMethod harq_method_from_string(const std::string& s);

// Combining state over the past attempts of one HARQ process. The current
// attempt is NOT part of the history; the effective_sinr_* operations take
// it separately and update_history folds it in afterwards. Value
// semantics: update_history returns a new history.
struct HarqHistory {
    HarqMethod method = HarqMethod::None;
    std::uint32_t attempts = 0;

    // ChaseComb: per-RB linear SINR summed across past attempts.
    std::vector<double> accumulated;

    // IncrRedund: one record per past attempt, in attempt order.
    struct IrAttempt {
        double sinr_eff = 0.0;         // linear effective SINR of the attempt
        std::uint64_t coded_bits = 0;  // coded bits carried by the attempt
    };
    std::vector<IrAttempt> ir_attempts;

    // RB count of the first attempt; the allocation shape is kept over
    // retransmissions, so every attempt must match.
    std::size_t rb_count = 0;

    // Information payload of the transport block, bits. Set by the caller
    // at HARQ-process start; constant across attempts.
    std::uint64_t info_bits = 0;

    // MCS of the first attempt. Combining under a different MCS is
    // rejected by the error model, never silently accepted.
    std::optional<McsId> mcs;

    // Debug mode: retain every attempt's raw spectrum so the incremental
    // IR form can be checked against direct evaluation over all RBs.
    bool retain_raw = false;
    std::vector<SinrSpectrum> raw_attempts;

    bool empty() const { return attempts == 0; }
    std::uint64_t total_coded_bits() const;
};

// Exponential effective SINR of one transmission: the scalar whose AWGN
// performance matches the frequency-selective input under parameter beta.
// Inputs linear, output linear, always within [min, max] of the input.
// Throws InvalidInputError on an empty spectrum, non-positive beta, or
// non-finite/negative SINR values.
double effective_sinr(const SinrSpectrum& sinrs, double beta);

// Chase combining: per-RB sums of history plus the current attempt, then
// the plain mapping. Empty history reduces to effective_sinr(current).
// Throws CombiningError on method or RB-count mismatch.
double effective_sinr_cc(const HarqHistory& history,
                         const SinrSpectrum& current, double beta);

// Incremental redundancy: pools the exponential terms of all attempts.
// Past attempts enter through their stored effective SINR, which equals
// their per-RB average exactly; empty history reduces to
// effective_sinr(current). Throws CombiningError on method or RB-count
// mismatch.
double effective_sinr_ir(const HarqHistory& history,
                         const SinrSpectrum& current, double beta);

// Effective channel code rate after combining: information bits over the
// total coded bits of all attempts. Exact rational.
Rational effective_ecr(std::uint64_t info_bits,
                       const std::vector<std::uint64_t>& coded_bits);

// IR only: the effective ECR used for curve access never drops below the
// smallest nominal ECR of the same modulation order in the table.
Rational clamp_ecr_ir(const Rational& ecr_eff, const McsEntry& mcs,
                      const McsTableSet& tables);

// Fold the current attempt into the history and return the result.
// ChaseComb extends the per-RB accumulation; IncrRedund appends
// {effective_sinr(current, beta), coded_bits}. The input is unmodified.
HarqHistory update_history(const HarqHistory& history,
                           const SinrSpectrum& current, double beta,
                           std::uint64_t coded_bits);

}  // namespace nrl2sm
