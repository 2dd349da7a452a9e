// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nrl2sm/rational.hpp"

namespace nrl2sm {

/// NR downlink MCS tables in scope: Table1 (up to 64-QAM) and Table2 (up to
/// 256-QAM). Table3 (low-SE) and transform-precoding variants are not modeled.
enum class McsTableId : std::uint8_t { Table1 = 1, Table2 = 2 };

std::string to_string(McsTableId id);
McsTableId mcs_table_from_string(const std::string& s);

/// (table, index) pair used across the pipeline to key MCS-dependent data.
struct McsId {
    McsTableId table = McsTableId::Table1;
    int index = 0;

    friend bool operator==(const McsId&, const McsId&) = default;
};

/// One MCS table row: modulation order Q_m, target code rate R (exact
/// fraction), spectral efficiency in bits/s/Hz, and the EESM calibration
/// parameter beta attached to this MCS.
struct McsEntry {
    McsTableId table_id = McsTableId::Table1;
    int index = 0;
    int modulation_order = 2;  // Q_m, bits per symbol
    Rational ecr{0, 1};                  // R
    double spectral_efficiency = 0.0;
    double beta = 0.0;
};

/// Immutable container for the two MCS tables plus derived CQI quantization.
/// Table1 holds indices 0..28, Table2 holds 0..27. Lookups with out-of-range
/// indices throw InvalidMcsError; nothing is clamped. Safe for unrestricted
/// concurrent reads once constructed.
class McsTableSet {
  public:
    /// The compiled-in tables (TS 38.214 5.1.3.1-1/2 rows with calibrated
    /// betas). Reference data files with identical content ship under
    /// core/data/ for external tooling and drop-in replacement.
    static const McsTableSet& builtin();

    /// Builds a set from explicit rows; validates all table invariants.
    static McsTableSet from_entries(std::vector<McsEntry> table1, std::vector<McsEntry> table2);

    /// Loads one table from its structured-text data file. Schema: object with
    /// "table_id" and "entries", each entry carrying {index, modulation_order,
    /// ecr_numerator, ecr_denominator, spectral_efficiency, beta}. Throws
    /// ParseError naming the offending key on schema violations.
    static std::vector<McsEntry> load_table_file(const std::filesystem::path& path);

    /// Convenience: load both table files and assemble a validated set.
    static McsTableSet load(const std::filesystem::path& table1_path,
                            const std::filesystem::path& table2_path);

    const McsEntry& lookup(McsTableId table, int index) const;
    const McsEntry& lookup(const McsId& id) const { return lookup(id.table, id.index); }

    double beta(McsTableId table, int index) const { return lookup(table, index).beta; }

    /// Lowest target code rate among entries of this table that share the
    /// modulation order of (table, index). Floors the HARQ-IR effective ECR.
    Rational min_ecr_same_modulation(McsTableId table, int index) const;
    Rational min_ecr_same_modulation(const McsId& id) const {
        return min_ecr_same_modulation(id.table, id.index);
    }

    /// 4-bit CQI for an MCS: a 15-level quantization of table spectral
    /// efficiency (CQI 0 is reserved for out-of-range reporting). Monotone
    /// non-decreasing in index; the lowest index maps to CQI 1 and the
    /// highest to CQI 15. Stand-in for the TS 38.214 CQI tables, which the
    /// source model does not pin down.
    int quantize_cqi(McsTableId table, int mcs_index) const;
    int quantize_cqi(const McsId& id) const { return quantize_cqi(id.table, id.index); }

    /// Highest-fidelity inverse: the lowest MCS index whose spectral
    /// efficiency reaches the CQI threshold. Guarantees
    /// mcs_for_cqi(quantize_cqi(m)) <= m, so quantization never reports a
    /// more aggressive rate than the UE selected. CQI 0 has no MCS.
    int mcs_for_cqi(McsTableId table, int cqi) const;

    std::size_t size(McsTableId table) const;
    std::span<const McsEntry> entries(McsTableId table) const;

    /// Index of the last row (28 for Table1, 27 for Table2).
    int max_index(McsTableId table) const;

  private:
    McsTableSet() = default;
    void build_cqi_thresholds();
    void validate() const;

    std::vector<McsEntry> table1_;
    std::vector<McsEntry> table2_;
    // cqi_thresholds_[t][k] is the minimum cumulative-max SE for CQI k+1.
    std::vector<double> cqi_thresholds_t1_;
    std::vector<double> cqi_thresholds_t2_;
    std::vector<double> cummax_se_t1_;
    std::vector<double> cummax_se_t2_;
};

}  // namespace nrl2sm
