// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/error_model.hpp"

#include <cmath>
#include <string>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

namespace {

double to_db(double linear) { return 10.0 * std::log10(linear); }

IrEcrMode resolve_mode(IrEcrMode mode, const BlerLut& lut) {
    if (mode != IrEcrMode::Auto) return mode;
    return lut.provenance.generator.rfind("synthetic", 0) == 0
               ? IrEcrMode::SinrOffset
               : IrEcrMode::CurveReselect;
}

// Same-modulation entry whose nominal rate is the largest one <= ecr_eff.
// The clamp floor guarantees at least the lowest same-modulation rate
// qualifies.
const McsEntry& reselect_curve(const McsEntry& entry, const Rational& ecr_eff,
                               const McsTableSet& tables) {
    const McsEntry* best = nullptr;
    for (int idx = 0; idx <= tables.max_index(entry.table_id); ++idx) {
        const McsEntry& e = tables.lookup(McsId{entry.table_id, idx});
        if (e.modulation_order != entry.modulation_order) continue;
        if (e.ecr <= ecr_eff && (best == nullptr || best->ecr < e.ecr)) {
            best = &e;
        }
    }
    if (best == nullptr) {
        throw CombiningError(
            "compute_tbler: no same-modulation curve at or below ecr_eff " +
            ecr_eff.str());
    }
    return *best;
}

}  // namespace

const char* to_string(IrEcrMode m) {
    switch (m) {
        case IrEcrMode::Auto: return "auto";
        case IrEcrMode::SinrOffset: return "sinr-offset";
        case IrEcrMode::CurveReselect: return "curve-reselect";
    }
    throw InvalidInputError("unknown IrEcrMode");
}

IrEcrMode ir_ecr_mode_from_string(const std::string& s) {
    if (s == "auto") return IrEcrMode::Auto;
    if (s == "sinr-offset") return IrEcrMode::SinrOffset;
    if (s == "curve-reselect") return IrEcrMode::CurveReselect;
    throw ParseError("unknown IR ECR mode '" + s +
                     "' (expected auto|sinr-offset|curve-reselect)");
}

L2smOutput compute_tbler(const SinrSpectrum& sinrs, const McsId& mcs,
                         std::int64_t tbs, const HarqHistory& history,
                         const BlerLut& lut, const McsTableSet& tables,
                         const CombineOptions& options) {
    if (!history.empty() && history.mcs && !(*history.mcs == mcs)) {
        throw CombiningError(
            "compute_tbler: MCS changed across HARQ attempts (history " +
            std::string(to_string(history.mcs->table)) + "/" +
            std::to_string(history.mcs->index) + ", current " +
            std::string(to_string(mcs.table)) + "/" +
            std::to_string(mcs.index) + ")");
    }
    const McsEntry& entry = tables.lookup(mcs);
    const double beta = entry.beta;

    L2smOutput out;
    switch (history.method) {
        case HarqMethod::ChaseComb:
            out.sinr_eff = effective_sinr_cc(history, sinrs, beta);
            break;
        case HarqMethod::IncrRedund:
            out.sinr_eff = effective_sinr_ir(history, sinrs, beta);
            break;
        case HarqMethod::None:
            out.sinr_eff = effective_sinr(sinrs, beta);
            break;
    }
    out.sinr_eff_db = to_db(out.sinr_eff);

    // First transmissions run at the nominal rate for every method; the
    // rate only drops once IR retransmissions add parity (Eq.-style
    // information/coded ratio, floored at the lowest same-modulation
    // nominal rate).
    out.ecr_eff = entry.ecr;
    if (history.method == HarqMethod::IncrRedund && !history.empty()) {
        if (options.coded_bits_current == 0) {
            throw CombiningError(
                "compute_tbler: IR retransmission needs coded_bits_current");
        }
        if (history.info_bits == 0) {
            throw CombiningError(
                "compute_tbler: IR history carries no info_bits");
        }
        std::vector<std::uint64_t> coded;
        coded.reserve(history.ir_attempts.size() + 1);
        for (const auto& a : history.ir_attempts) coded.push_back(a.coded_bits);
        coded.push_back(options.coded_bits_current);
        out.ecr_eff =
            clamp_ecr_ir(effective_ecr(history.info_bits, coded), entry, tables);
    }

    // Base graph and segmentation always follow the nominal MCS rate: the
    // transport block was encoded once, at the first transmission.
    out.base_graph = select_base_graph(tbs, entry.ecr);
    const SegmentationResult seg = segment(tbs, out.base_graph);
    out.num_code_blocks = seg.num_code_blocks;
    out.cbs = seg.code_block_size;

    // Rate reduction enters the lookup here; see IrEcrMode.
    double lookup_db = out.sinr_eff_db;
    McsId lookup_key = mcs;
    if (out.ecr_eff < entry.ecr) {
        switch (resolve_mode(options.ir_ecr_mode, lut)) {
            case IrEcrMode::SinrOffset: {
                const double ratio = entry.ecr.to_double() / out.ecr_eff.to_double();
                lookup_db += 10.0 * std::log10(ratio) *
                             static_cast<double>(entry.modulation_order) / 2.0;
                break;
            }
            case IrEcrMode::CurveReselect: {
                const McsEntry& sel = reselect_curve(entry, out.ecr_eff, tables);
                lookup_key = McsId{sel.table_id, sel.index};
                break;
            }
            case IrEcrMode::Auto:
                break;  // unreachable, resolve_mode never returns Auto
        }
    }

    out.cbler = lookup_cbler(lut, lookup_key.table, lookup_key.index, out.cbs,
                             lookup_db, &out.lookup_flags);
    out.tbler = transport_bler(out.cbler, out.num_code_blocks);
    return out;
}

bool draw_decode(double tbler, Pcg32& rng) {
    if (!(tbler >= 0.0) || !(tbler <= 1.0)) {
        throw InvalidInputError("draw_decode: tbler must be in [0,1], got " +
                                std::to_string(tbler));
    }
    // next_double() is uniform on [0,1): tbler 0 never fails, 1 never
    // succeeds, with exactly one draw consumed either way.
    return rng.next_double() >= tbler;
}

}  // namespace nrl2sm
