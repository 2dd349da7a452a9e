// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace nrl2sm {

/// PCG32 (pcg_setseq_64_xsh_rr_32_random_r, O'Neill 2014), pinned here so
/// that seeded runs reproduce bit-identically on any platform or language:
///
///   state' = state * 6364136223846793005 + inc
///   out    = rotr32( ((state >> 18) ^ state) >> 27, state >> 59 )
///
/// Seeding follows the reference pcg32_srandom_r: state starts at 0, the
/// stream id selects an odd increment (inc = stream*2+1), one step, add the
/// seed, one more step. Distinct stream ids give independent sequences, which
/// is how simulation sweeps split per-replication generators.
///
/// Algorithm id: "pcg32-v1" (recorded in file provenance fields).
class Pcg32 {
  public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        const std::uint64_t hi = static_cast<std::uint64_t>(next_u32()) << 21u;
        const std::uint64_t lo = static_cast<std::uint64_t>(next_u32()) >> 11u;
        return static_cast<double>(hi | lo) * 0x1.0p-53;
    }

    /// Child generator for an independent substream.
    Pcg32 split(std::uint64_t substream) const {
        return Pcg32(state_ ^ 0x9e3779b97f4a7c15ULL, (inc_ >> 1u) + 1u + substream);
    }

    static constexpr const char* algorithm_id() { return "pcg32-v1"; }

  private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

}  // namespace nrl2sm
