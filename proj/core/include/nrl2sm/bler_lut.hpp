// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nrl2sm/ldpc.hpp"
#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/rational.hpp"

namespace nrl2sm {

// One SINR->BLER waterfall curve for a fixed code block size.
struct CbsCurve {
    struct Point {
        double sinr_db = 0.0;
        double bler = 1.0;
        bool operator==(const Point&) const = default;
    };

    std::int64_t cbs = 0;
    BaseGraph base_graph = BaseGraph::BG1;
    std::vector<Point> points;  // strictly increasing sinr_db, bler non-increasing

    bool operator==(const CbsCurve&) const = default;
};

struct LutProvenance {
    std::string generator;
    std::uint64_t seed = 0;
    int version = 1;
    bool operator==(const LutProvenance&) const = default;
};

// SINR->BLER lookup tables keyed by (MCS table, MCS index), each key
// holding curves for several code block sizes. Immutable in use: build or
// load once, then read concurrently.
class BlerLut {
  public:
    // Validates the curve and inserts it in cbs order. Duplicate cbs for a
    // key, too few points, unsorted points or out-of-range BLER throw
    // InvalidInputError.
    void add_curve(McsTableId table, int mcs_index, CbsCurve curve);

    // Curves for one key, cbs ascending; nullptr when the key is absent.
    const std::vector<CbsCurve>* curves(McsTableId table, int mcs_index) const;

    bool has_key(McsTableId table, int mcs_index) const;
    std::size_t num_keys() const;

    // Deterministic iteration order: Table1 before Table2, index ascending.
    void for_each(const std::function<void(McsTableId, int,
                                           const std::vector<CbsCurve>&)>& fn) const;

    LutProvenance provenance;

    bool operator==(const BlerLut&) const = default;

  private:
    std::map<std::pair<int, int>, std::vector<CbsCurve>> curves_;
};

struct LookupFlags {
    // Requested cbs was below every stored curve; the smallest stored
    // curve was used as the conservative fallback.
    bool cbs_fallback = false;
};

// Worst-case BLER lookup: picks the curve with the largest stored
// cbs <= requested, and inside it the point with the largest stored
// sinr_db <= sinr_eff_db. Below the first point the result is 1.0; above
// the last point the last stored BLER is held. Missing key throws
// MissingCurveError; cbs below all curves falls back to the smallest one
// and sets flags->cbs_fallback.
double lookup_cbler(const BlerLut& lut, McsTableId table, int mcs_index,
                    std::int64_t cbs, double sinr_eff_db,
                    LookupFlags* flags = nullptr);

// Parametric AWGN-style waterfall standing in for link-level curves:
//   BLER = 0.5 * erfc((sinr_db - mu) / (sqrt(2) * sigma))
// with mu = 10*log10(2^(Qm * R_eff * kappa) - 1), kappa = 1.25, and
// sigma = sigma0 / sqrt(cbs/1000), sigma0 = 1 dB. Synthetic constants, no
// link-level fidelity claimed.
double synth_awgn_cbler(const McsEntry& mcs, const Rational& ecr_eff,
                        std::int64_t cbs, double sinr_db);

inline constexpr double kSynthCapacityBackoff = 1.25;  // kappa
inline constexpr double kSynthSigma0Db = 1.0;          // sigma0

// Midpoint mu of the synthetic waterfall for (Qm, R_eff).
double synth_waterfall_mid_db(int modulation_order, double ecr_eff);

// Samples synth_awgn_cbler over the grids for every MCS of both tables.
// Stored values are clipped so that at each SINR grid point BLER is
// non-increasing as cbs grows; the raw parametric curves cross below
// their midpoints, which would break the worst-case lookup's cbs
// monotonicity. `seed` is recorded as provenance only.
BlerLut generate_synthetic_lut(const McsTableSet& tables,
                               const std::vector<std::int64_t>& cbs_grid,
                               const std::vector<double>& sinr_grid_db,
                               std::uint64_t seed = 0);

// JSON persistence. save_lut emits deterministic bytes (sorted keys,
// fixed ordering); load_lut(save_lut(x)) == x exactly. Schema violations
// throw ParseError naming the offending key.
void save_lut(const BlerLut& lut, const std::string& path);
BlerLut load_lut(const std::string& path);

}  // namespace nrl2sm
