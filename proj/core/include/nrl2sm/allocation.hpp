// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "nrl2sm/mcs_tables.hpp"

namespace nrl2sm {

// Transport block size for an allocation of n_rbs x n_symbols carrying
// `mcs`: one symbol is reserved for DMRS, the rest carry data, so
// N_RE = 12 * (n_symbols - 1) * n_rbs, raw capacity = N_RE * Qm * R, and
// the TBS is the largest byte multiple <= raw, floored at 24 bits.
// Simplified stand-in for the standardized TBS procedure; monotone in all
// arguments. Throws InvalidConfigError on empty allocations (n_symbols
// must be >= 2: one DMRS plus at least one data symbol).
std::int64_t tbs_calculate(int n_rbs, int n_symbols, const McsEntry& mcs);

}  // namespace nrl2sm
