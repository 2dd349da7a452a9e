// SPDX-License-Identifier: Apache-2.0

#include "nrl2sm/mcs_tables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

namespace {

struct RawRow {
    int qm;
    std::int64_t ecr_num;
    std::int64_t ecr_den;
    double se;
    double beta;
};

// TS 38.214 Table 5.1.3.1-1 rows with calibrated EESM betas.
// Two Table2 rows (20, 26) are half-step rates, hence the 2048 denominators.
constexpr RawRow kTable1[] = {
    {2, 120, 1024, 0.2344, 1.60},  {2, 157, 1024, 0.3066, 1.61},  {2, 193, 1024, 0.3770, 1.63},
    {2, 251, 1024, 0.4902, 1.65},  {2, 308, 1024, 0.6016, 1.67},  {2, 379, 1024, 0.7402, 1.70},
    {2, 449, 1024, 0.8770, 1.73},  {2, 526, 1024, 1.0273, 1.76},  {2, 602, 1024, 1.1758, 1.79},
    {2, 679, 1024, 1.3262, 1.82},  {4, 340, 1024, 1.3281, 3.97},  {4, 378, 1024, 1.4766, 4.27},
    {4, 434, 1024, 1.6953, 4.71},  {4, 490, 1024, 1.9141, 5.16},  {4, 553, 1024, 2.1602, 5.66},
    {4, 616, 1024, 2.4063, 6.16},  {4, 658, 1024, 2.5703, 6.50},  {6, 438, 1024, 2.5664, 9.95},
    {6, 466, 1024, 2.7305, 10.97}, {6, 517, 1024, 3.0293, 12.92}, {6, 567, 1024, 3.3223, 14.96},
    {6, 616, 1024, 3.6094, 17.06}, {6, 666, 1024, 3.9023, 19.33}, {6, 719, 1024, 4.2129, 21.85},
    {6, 772, 1024, 4.5234, 24.51}, {6, 822, 1024, 4.8164, 27.14}, {6, 873, 1024, 5.1152, 29.94},
    {6, 910, 1024, 5.3320, 32.05}, {6, 948, 1024, 5.5547, 34.28},
};

// TS 38.214 Table 5.1.3.1-2 rows (256-QAM table).
constexpr RawRow kTable2[] = {
    {2, 120, 1024, 0.2344, 1.60},   {2, 193, 1024, 0.3770, 1.63},   {2, 308, 1024, 0.6016, 1.67},
    {2, 449, 1024, 0.8770, 1.73},   {2, 602, 1024, 1.1758, 1.79},   {4, 378, 1024, 1.4766, 4.27},
    {4, 434, 1024, 1.6953, 4.71},   {4, 490, 1024, 1.9141, 5.16},   {4, 553, 1024, 2.1602, 5.66},
    {4, 616, 1024, 2.4063, 6.16},   {4, 658, 1024, 2.5703, 6.50},   {6, 466, 1024, 2.7305, 10.97},
    {6, 517, 1024, 3.0293, 12.92},  {6, 567, 1024, 3.3223, 14.96},  {6, 616, 1024, 3.6094, 17.06},
    {6, 666, 1024, 3.9023, 19.33},  {6, 719, 1024, 4.2129, 21.85},  {6, 772, 1024, 4.5234, 24.51},
    {6, 822, 1024, 4.8164, 27.14},  {6, 873, 1024, 5.1152, 29.94},  {8, 1365, 2048, 5.3320, 56.48},
    {8, 711, 1024, 5.5547, 65.00},  {8, 754, 1024, 5.8906, 78.58},  {8, 797, 1024, 6.2266, 92.48},
    {8, 841, 1024, 6.5703, 106.27}, {8, 885, 1024, 6.9141, 118.74}, {8, 1833, 2048, 7.1602, 126.36},
    {8, 948, 1024, 7.4063, 132.54},
};

std::vector<McsEntry> materialize(McsTableId id, std::span<const RawRow> rows) {
    std::vector<McsEntry> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.push_back(McsEntry{
            .table_id = id,
            .index = static_cast<int>(i),
            .modulation_order = rows[i].qm,
            .ecr = Rational(rows[i].ecr_num, rows[i].ecr_den),
            .spectral_efficiency = rows[i].se,
            .beta = rows[i].beta,
        });
    }
    return out;
}

constexpr std::size_t kCqiLevels = 15;

}  // namespace

std::string to_string(McsTableId id) {
    return id == McsTableId::Table1 ? "Table1" : "Table2";
}

McsTableId mcs_table_from_string(const std::string& s) {
    if (s == "Table1" || s == "1") return McsTableId::Table1;
    if (s == "Table2" || s == "2") return McsTableId::Table2;
    throw ParseError("unknown MCS table id '" + s + "' (expected Table1 or Table2)");
}

const McsTableSet& McsTableSet::builtin() {
    static const McsTableSet set =
        from_entries(materialize(McsTableId::Table1, kTable1), materialize(McsTableId::Table2, kTable2));
    return set;
}

McsTableSet McsTableSet::from_entries(std::vector<McsEntry> table1, std::vector<McsEntry> table2) {
    McsTableSet set;
    set.table1_ = std::move(table1);
    set.table2_ = std::move(table2);
    set.validate();
    set.build_cqi_thresholds();
    return set;
}

void McsTableSet::validate() const {
    if (table1_.size() != 29) {
        throw ParseError("Table1 must have exactly 29 entries, got " + std::to_string(table1_.size()));
    }
    if (table2_.size() != 28) {
        throw ParseError("Table2 must have exactly 28 entries, got " + std::to_string(table2_.size()));
    }
    for (const auto* table : {&table1_, &table2_}) {
        double prev_beta = 0.0;
        const int qm_cap = table == &table1_ ? 6 : 8;
        for (std::size_t i = 0; i < table->size(); ++i) {
            const McsEntry& e = (*table)[i];
            const std::string key = to_string(e.table_id) + "[" + std::to_string(i) + "]";
            if (e.index != static_cast<int>(i)) {
                throw ParseError(key + ": index field " + std::to_string(e.index) + " out of order");
            }
            if (e.modulation_order != 2 && e.modulation_order != 4 && e.modulation_order != 6 &&
                e.modulation_order != 8) {
                throw ParseError(key + ": modulation_order must be one of {2,4,6,8}");
            }
            if (e.modulation_order > qm_cap) {
                throw ParseError(key + ": modulation_order exceeds the table cap");
            }
            if (e.ecr.num() <= 0 || e.ecr >= Rational(1, 1)) {
                throw ParseError(key + ": ecr must lie in (0,1)");
            }
            if (!(e.spectral_efficiency > 0.0)) {
                throw ParseError(key + ": spectral_efficiency must be positive");
            }
            if (std::abs(e.spectral_efficiency - e.modulation_order * e.ecr.to_double()) > 0.01) {
                throw ParseError(key + ": spectral_efficiency inconsistent with Q_m * R");
            }
            if (!(e.beta > 0.0)) {
                throw ParseError(key + ": beta must be positive");
            }
            if (e.beta < prev_beta) {
                throw ParseError(key + ": beta must be non-decreasing in index");
            }
            prev_beta = e.beta;
        }
    }
}

void McsTableSet::build_cqi_thresholds() {
    auto build = [](const std::vector<McsEntry>& table, std::vector<double>& cummax,
                    std::vector<double>& thresholds) {
        cummax.resize(table.size());
        double running = 0.0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            running = std::max(running, table[i].spectral_efficiency);
            cummax[i] = running;
        }
        // 15 anchor rows spread evenly across the table; quantizing against the
        // cumulative max keeps the map monotone through the SE dip at the
        // 64-QAM transition of Table1.
        thresholds.resize(kCqiLevels);
        const double last = static_cast<double>(table.size() - 1);
        for (std::size_t k = 0; k < kCqiLevels; ++k) {
            const auto anchor =
                static_cast<std::size_t>(std::llround(static_cast<double>(k) * last / (kCqiLevels - 1)));
            thresholds[k] = cummax[anchor];
        }
    };
    build(table1_, cummax_se_t1_, cqi_thresholds_t1_);
    build(table2_, cummax_se_t2_, cqi_thresholds_t2_);
}

const McsEntry& McsTableSet::lookup(McsTableId table, int index) const {
    const auto& rows = table == McsTableId::Table1 ? table1_ : table2_;
    if (index < 0 || static_cast<std::size_t>(index) >= rows.size()) {
        throw InvalidMcsError("MCS index " + std::to_string(index) + " out of range for " +
                              to_string(table) + " (valid 0.." + std::to_string(rows.size() - 1) + ")");
    }
    return rows[index];
}

Rational McsTableSet::min_ecr_same_modulation(McsTableId table, int index) const {
    const McsEntry& ref = lookup(table, index);
    const auto rows = entries(table);
    Rational best = ref.ecr;
    for (const McsEntry& e : rows) {
        if (e.modulation_order == ref.modulation_order && e.ecr < best) {
            best = e.ecr;
        }
    }
    return best;
}

int McsTableSet::quantize_cqi(McsTableId table, int mcs_index) const {
    (void)lookup(table, mcs_index);
    const auto& cummax = table == McsTableId::Table1 ? cummax_se_t1_ : cummax_se_t2_;
    const auto& thresholds = table == McsTableId::Table1 ? cqi_thresholds_t1_ : cqi_thresholds_t2_;
    const double se = cummax[mcs_index];
    int cqi = 1;
    for (std::size_t k = 1; k < thresholds.size(); ++k) {
        if (thresholds[k] <= se) {
            cqi = static_cast<int>(k + 1);
        }
    }
    return cqi;
}

int McsTableSet::mcs_for_cqi(McsTableId table, int cqi) const {
    if (cqi < 1 || cqi > static_cast<int>(kCqiLevels)) {
        throw InvalidInputError("CQI " + std::to_string(cqi) + " has no MCS mapping (valid 1..15)");
    }
    const auto& cummax = table == McsTableId::Table1 ? cummax_se_t1_ : cummax_se_t2_;
    const auto& thresholds = table == McsTableId::Table1 ? cqi_thresholds_t1_ : cqi_thresholds_t2_;
    const double t = thresholds[cqi - 1];
    for (std::size_t m = 0; m < cummax.size(); ++m) {
        if (cummax[m] >= t) {
            return static_cast<int>(m);
        }
    }
    return max_index(table);  // unreachable: thresholds come from the table itself
}

std::size_t McsTableSet::size(McsTableId table) const {
    return table == McsTableId::Table1 ? table1_.size() : table2_.size();
}

std::span<const McsEntry> McsTableSet::entries(McsTableId table) const {
    return table == McsTableId::Table1 ? std::span<const McsEntry>(table1_)
                                       : std::span<const McsEntry>(table2_);
}

int McsTableSet::max_index(McsTableId table) const {
    return static_cast<int>(size(table)) - 1;
}

std::vector<McsEntry> McsTableSet::load_table_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open MCS table file " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("MCS table file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("table_id") || !doc.contains("entries")) {
        throw ParseError(path.string() + ": expected object with 'table_id' and 'entries'");
    }
    const McsTableId id = mcs_table_from_string(doc.at("table_id").get<std::string>());
    std::vector<McsEntry> out;
    for (const auto& row : doc.at("entries")) {
        for (const char* field : {"index", "modulation_order", "ecr_numerator", "ecr_denominator",
                                  "spectral_efficiency", "beta"}) {
            if (!row.contains(field)) {
                throw ParseError(path.string() + ": entry missing field '" + field + "'");
            }
        }
        out.push_back(McsEntry{
            .table_id = id,
            .index = row.at("index").get<int>(),
            .modulation_order = row.at("modulation_order").get<int>(),
            .ecr = Rational(row.at("ecr_numerator").get<std::int64_t>(),
                            row.at("ecr_denominator").get<std::int64_t>()),
            .spectral_efficiency = row.at("spectral_efficiency").get<double>(),
            .beta = row.at("beta").get<double>(),
        });
    }
    return out;
}

McsTableSet McsTableSet::load(const std::filesystem::path& table1_path,
                              const std::filesystem::path& table2_path) {
    auto t1 = load_table_file(table1_path);
    auto t2 = load_table_file(table2_path);
    if (t1.empty() || t1.front().table_id != McsTableId::Table1) {
        throw ParseError(table1_path.string() + ": expected table_id Table1");
    }
    if (t2.empty() || t2.front().table_id != McsTableId::Table2) {
        throw ParseError(table2_path.string() + ": expected table_id Table2");
    }
    return from_entries(std::move(t1), std::move(t2));
}

}  // namespace nrl2sm
