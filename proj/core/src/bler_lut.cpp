// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/bler_lut.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

namespace {

std::string key_name(McsTableId table, int mcs_index) {
    return std::string(to_string(table)) + "/MCS" + std::to_string(mcs_index);
}

void validate_curve(const CbsCurve& c, const std::string& key) {
    if (c.cbs < 24) {
        throw InvalidInputError("curve " + key + ": cbs must be >= 24");
    }
    if (c.points.size() < 2) {
        throw InvalidInputError("curve " + key + " cbs " +
                                std::to_string(c.cbs) +
                                ": needs at least 2 points");
    }
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const auto& p = c.points[i];
        if (!std::isfinite(p.sinr_db)) {
            throw InvalidInputError("curve " + key + ": non-finite sinr_db");
        }
        if (!(p.bler >= 0.0 && p.bler <= 1.0)) {
            throw InvalidInputError("curve " + key + ": bler out of [0,1]");
        }
        if (i > 0) {
            if (!(p.sinr_db > c.points[i - 1].sinr_db)) {
                throw InvalidInputError("curve " + key +
                                        ": sinr_db not strictly increasing");
            }
            if (p.bler > c.points[i - 1].bler) {
                throw InvalidInputError("curve " + key +
                                        ": bler increases along the curve");
            }
        }
    }
}

}  // namespace

void BlerLut::add_curve(McsTableId table, int mcs_index, CbsCurve curve) {
    const std::string key = key_name(table, mcs_index);
    validate_curve(curve, key);
    auto& list = curves_[{static_cast<int>(table), mcs_index}];
    auto pos = std::lower_bound(
        list.begin(), list.end(), curve.cbs,
        [](const CbsCurve& c, std::int64_t cbs) { return c.cbs < cbs; });
    if (pos != list.end() && pos->cbs == curve.cbs) {
        throw InvalidInputError("curve " + key + ": duplicate cbs " +
                                std::to_string(curve.cbs));
    }
    list.insert(pos, std::move(curve));
}

const std::vector<CbsCurve>* BlerLut::curves(McsTableId table,
                                             int mcs_index) const {
    auto it = curves_.find({static_cast<int>(table), mcs_index});
    return it == curves_.end() ? nullptr : &it->second;
}

bool BlerLut::has_key(McsTableId table, int mcs_index) const {
    return curves(table, mcs_index) != nullptr;
}

std::size_t BlerLut::num_keys() const { return curves_.size(); }

void BlerLut::for_each(
    const std::function<void(McsTableId, int, const std::vector<CbsCurve>&)>& fn)
    const {
    for (const auto& [key, list] : curves_) {
        fn(static_cast<McsTableId>(key.first), key.second, list);
    }
}

double lookup_cbler(const BlerLut& lut, McsTableId table, int mcs_index,
                    std::int64_t cbs, double sinr_eff_db, LookupFlags* flags) {
    const auto* list = lut.curves(table, mcs_index);
    if (list == nullptr || list->empty()) {
        throw MissingCurveError("no BLER curves for " +
                                key_name(table, mcs_index));
    }
    // Largest stored cbs <= requested; below all -> smallest stored curve.
    const CbsCurve* curve = nullptr;
    for (const auto& c : *list) {
        if (c.cbs <= cbs) {
            curve = &c;
        } else {
            break;
        }
    }
    if (curve == nullptr) {
        curve = &list->front();
        if (flags != nullptr) flags->cbs_fallback = true;
    }

    // Largest stored sinr <= query; below the first point the block is
    // assumed lost (worst case), above the last the final value holds.
    const auto& pts = curve->points;
    if (sinr_eff_db < pts.front().sinr_db) {
        return 1.0;
    }
    auto it = std::upper_bound(
        pts.begin(), pts.end(), sinr_eff_db,
        [](double s, const CbsCurve::Point& p) { return s < p.sinr_db; });
    return std::prev(it)->bler;
}

double synth_waterfall_mid_db(int modulation_order, double ecr_eff) {
    const double bits = modulation_order * ecr_eff * kSynthCapacityBackoff;
    return 10.0 * std::log10(std::exp2(bits) - 1.0);
}

double synth_awgn_cbler(const McsEntry& mcs, const Rational& ecr_eff,
                        std::int64_t cbs, double sinr_db) {
    if (cbs < 24) {
        throw InvalidInputError("synth_awgn_cbler: cbs must be >= 24");
    }
    const double r = ecr_eff.to_double();
    if (!(r > 0.0) || !(r < 1.0)) {
        throw InvalidInputError("synth_awgn_cbler: ecr_eff must be in (0,1)");
    }
    const double mu = synth_waterfall_mid_db(mcs.modulation_order, r);
    const double sigma =
        kSynthSigma0Db / std::sqrt(static_cast<double>(cbs) / 1000.0);
    return 0.5 * std::erfc((sinr_db - mu) / (std::sqrt(2.0) * sigma));
}

BlerLut generate_synthetic_lut(const McsTableSet& tables,
                               const std::vector<std::int64_t>& cbs_grid,
                               const std::vector<double>& sinr_grid_db,
                               std::uint64_t seed) {
    if (cbs_grid.empty() || sinr_grid_db.empty()) {
        throw GenerationError("generate_synthetic_lut: empty grid");
    }
    if (sinr_grid_db.size() < 2) {
        throw GenerationError(
            "generate_synthetic_lut: need >= 2 SINR grid points per curve");
    }
    std::vector<std::int64_t> cbs_sorted = cbs_grid;
    std::sort(cbs_sorted.begin(), cbs_sorted.end());
    cbs_sorted.erase(std::unique(cbs_sorted.begin(), cbs_sorted.end()),
                     cbs_sorted.end());
    if (cbs_sorted.front() < 24) {
        throw GenerationError("generate_synthetic_lut: cbs grid below 24");
    }
    std::vector<double> sinr_sorted = sinr_grid_db;
    std::sort(sinr_sorted.begin(), sinr_sorted.end());
    sinr_sorted.erase(std::unique(sinr_sorted.begin(), sinr_sorted.end()),
                      sinr_sorted.end());
    if (sinr_sorted.size() < 2) {
        throw GenerationError(
            "generate_synthetic_lut: SINR grid collapses to < 2 points");
    }

    BlerLut lut;
    lut.provenance = {"synthetic-awgn-v1", seed, 1};

    for (McsTableId table : {McsTableId::Table1, McsTableId::Table2}) {
        for (int idx = 0; idx <= tables.max_index(table); ++idx) {
            const McsEntry& e = tables.lookup(McsId{table, idx});
            // Running per-SINR minimum over growing cbs: the parametric
            // curves sharpen with cbs and cross below mu, which would let
            // a larger block look worse at low SINR and break the
            // lookup's cbs monotonicity.
            std::vector<double> floor_bler(sinr_sorted.size(), 1.0);
            for (std::int64_t cbs : cbs_sorted) {
                CbsCurve c;
                c.cbs = cbs;
                c.base_graph = select_base_graph(cbs, e.ecr);
                c.points.reserve(sinr_sorted.size());
                for (std::size_t i = 0; i < sinr_sorted.size(); ++i) {
                    double b = synth_awgn_cbler(e, e.ecr, cbs, sinr_sorted[i]);
                    b = std::min(b, floor_bler[i]);
                    floor_bler[i] = b;
                    c.points.push_back({sinr_sorted[i], b});
                }
                try {
                    lut.add_curve(table, idx, std::move(c));
                } catch (const InvalidInputError& e2) {
                    throw GenerationError(std::string("generate_synthetic_lut: ") +
                                          e2.what());
                }
            }
        }
    }
    return lut;
}

namespace {

nlohmann::json lut_to_json(const BlerLut& lut) {
    nlohmann::json tables = nlohmann::json::array();
    McsTableId current_table = McsTableId::Table1;
    nlohmann::json* current = nullptr;
    lut.for_each([&](McsTableId table, int idx,
                     const std::vector<CbsCurve>& curves) {
        if (current == nullptr || table != current_table) {
            tables.push_back(
                {{"table_id", to_string(table)}, {"mcs", nlohmann::json::array()}});
            current = &tables.back();
            current_table = table;
        }
        nlohmann::json mcs_entry = {{"index", idx},
                                    {"curves", nlohmann::json::array()}};
        for (const auto& c : curves) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : c.points) {
                pts.push_back({p.sinr_db, p.bler});
            }
            mcs_entry["curves"].push_back({{"cbs", c.cbs},
                                           {"bg", to_string(c.base_graph)},
                                           {"points", std::move(pts)}});
        }
        (*current)["mcs"].push_back(std::move(mcs_entry));
    });
    return {{"version", lut.provenance.version},
            {"generator", lut.provenance.generator},
            {"seed", lut.provenance.seed},
            {"tables", std::move(tables)}};
}

}  // namespace

void save_lut(const BlerLut& lut, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw GenerationError("save_lut: cannot open " + path + " for writing");
    }
    out << lut_to_json(lut).dump(1) << "\n";
    if (!out) {
        throw GenerationError("save_lut: write to " + path + " failed");
    }
}

BlerLut load_lut(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("load_lut: cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_lut: " + path + ": " + e.what());
    }

    BlerLut lut;
    try {
        lut.provenance.version = doc.at("version").get<int>();
        if (lut.provenance.version != 1) {
            throw ParseError("load_lut: unsupported version " +
                             std::to_string(lut.provenance.version));
        }
        lut.provenance.generator = doc.at("generator").get<std::string>();
        lut.provenance.seed = doc.at("seed").get<std::uint64_t>();
        for (const auto& tbl : doc.at("tables")) {
            const McsTableId table =
                mcs_table_from_string(tbl.at("table_id").get<std::string>());
            for (const auto& m : tbl.at("mcs")) {
                const int idx = m.at("index").get<int>();
                for (const auto& cj : m.at("curves")) {
                    CbsCurve c;
                    c.cbs = cj.at("cbs").get<std::int64_t>();
                    c.base_graph =
                        base_graph_from_string(cj.at("bg").get<std::string>());
                    for (const auto& pj : cj.at("points")) {
                        if (!pj.is_array() || pj.size() != 2) {
                            throw ParseError("point is not a [sinr_db, bler] pair");
                        }
                        c.points.push_back(
                            {pj[0].get<double>(), pj[1].get<double>()});
                    }
                    try {
                        lut.add_curve(table, idx, std::move(c));
                    } catch (const InvalidInputError& e) {
                        throw ParseError(e.what());
                    }
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_lut: " + path + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError("load_lut: " + path + ": " + e.what());
    }
    return lut;
}

}  // namespace nrl2sm
