// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/allocation.hpp"

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

std::int64_t tbs_calculate(int n_rbs, int n_symbols, const McsEntry& mcs) {
    if (n_rbs < 1) {
        throw InvalidConfigError("tbs_calculate: n_rbs must be >= 1");
    }
    if (n_symbols < 2) {
        throw InvalidConfigError(
            "tbs_calculate: n_symbols must be >= 2 (1 DMRS + data)");
    }
    const std::int64_t n_re =
        12LL * static_cast<std::int64_t>(n_symbols - 1) * n_rbs;
    // raw = N_RE * Qm * num/den, floored to a byte multiple, all integer.
    const std::int64_t raw_num =
        n_re * mcs.modulation_order * mcs.ecr.num();
    const std::int64_t raw_bits = raw_num / mcs.ecr.den();
    const std::int64_t tbs = (raw_bits / 8) * 8;
    return tbs < 24 ? 24 : tbs;
}

}  // namespace nrl2sm
