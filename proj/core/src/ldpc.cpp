// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/ldpc.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nrl2sm/errors.hpp"

namespace nrl2sm {

namespace {

// TS 38.212 Table 5.3.2-1: Z = a * 2^j for a in {2,3,5,7,9,11,13,15},
// j = 0..7, Z <= 384.
const std::vector<std::int64_t> kLiftingSizes = {
    2,   3,   4,   5,   6,   7,   8,   9,   10,  11,  12,  13,
    14,  15,  16,  18,  20,  22,  24,  26,  28,  30,  32,  36,
    40,  44,  48,  52,  56,  60,  64,  72,  80,  88,  96,  104,
    112, 120, 128, 144, 160, 176, 192, 208, 224, 240, 256, 288,
    320, 352, 384};

// BG2 systematic-column count K_b by TB-with-CRC size.
std::int64_t kb_bg2(std::int64_t b) {
    if (b > 640) return 10;
    if (b > 560) return 9;
    if (b > 192) return 8;
    return 6;
}

}  // namespace

const char* to_string(BaseGraph bg) {
    return bg == BaseGraph::BG1 ? "BG1" : "BG2";
}

BaseGraph base_graph_from_string(const std::string& s) {
    if (s == "BG1" || s == "bg1" || s == "1") return BaseGraph::BG1;
    if (s == "BG2" || s == "bg2" || s == "2") return BaseGraph::BG2;
    throw ParseError("unknown base graph '" + s + "' (expected BG1|BG2)");
}

std::int64_t max_code_block_size(BaseGraph bg) {
    return bg == BaseGraph::BG1 ? 8448 : 3840;
}

BaseGraph select_base_graph(std::int64_t tbs, const Rational& ecr) {
    if (tbs <= 0) {
        throw InvalidInputError("select_base_graph: tbs must be > 0");
    }
    if (!(Rational(0, 1) < ecr) || !(ecr < Rational(1, 1))) {
        throw InvalidInputError("select_base_graph: ecr must be in (0,1), got " +
                                ecr.str());
    }
    if (tbs <= 292) return BaseGraph::BG2;
    if (ecr <= Rational(25, 100)) return BaseGraph::BG2;
    if (tbs <= 3824 && ecr <= Rational(67, 100)) return BaseGraph::BG2;
    return BaseGraph::BG1;
}

std::int64_t tb_crc_length(std::int64_t tbs) {
    if (tbs <= 0) {
        throw InvalidInputError("tb_crc_length: tbs must be > 0");
    }
    return tbs > 3824 ? 24 : 16;
}

SegmentationResult segment(std::int64_t tbs, BaseGraph bg,
                           std::int64_t max_tbs) {
    if (tbs <= 0) {
        throw InvalidInputError("segment: tbs must be > 0");
    }
    if (tbs > max_tbs) {
        throw UnsupportedSizeError("segment: tbs " + std::to_string(tbs) +
                                   " exceeds the supported maximum " +
                                   std::to_string(max_tbs));
    }

    SegmentationResult r;
    r.base_graph = bg;
    const std::int64_t b = tbs + tb_crc_length(tbs);
    r.tb_with_crc = b;

    const std::int64_t k_cb = max_code_block_size(bg);
    std::int64_t b_prime = b;
    if (b <= k_cb) {
        r.num_code_blocks = 1;
        r.per_cb_crc = 0;
    } else {
        // ceil(B / (K_cb - 24)) without floating point.
        r.num_code_blocks = (b + (k_cb - 24) - 1) / (k_cb - 24);
        r.per_cb_crc = 24;
        b_prime = b + 24 * r.num_code_blocks;
    }

    const std::int64_t k_prime =
        (b_prime + r.num_code_blocks - 1) / r.num_code_blocks;
    const std::int64_t k_b =
        bg == BaseGraph::BG1 ? 22 : kb_bg2(b);

    std::int64_t z_c = 0;
    for (std::int64_t z : kLiftingSizes) {
        if (k_b * z >= k_prime) {
            z_c = z;
            break;
        }
    }
    if (z_c == 0) {
        throw UnsupportedSizeError(
            "segment: no lifting size covers K' = " + std::to_string(k_prime));
    }
    r.lifting_size = z_c;
    r.code_block_size = (bg == BaseGraph::BG1 ? 22 : 10) * z_c;
    return r;
}

double transport_bler(double cbler, std::int64_t num_code_blocks) {
    if (!(cbler >= 0.0) || !(cbler <= 1.0)) {
        throw InvalidInputError("transport_bler: cbler must be in [0,1], got " +
                                std::to_string(cbler));
    }
    if (num_code_blocks < 1) {
        throw InvalidInputError("transport_bler: need at least one code block");
    }
    // 1 - (1-p)^C; exact at both endpoints.
    return 1.0 - std::pow(1.0 - cbler, static_cast<double>(num_code_blocks));
}

const std::vector<std::int64_t>& standard_lifting_sizes() {
    return kLiftingSizes;
}

std::vector<std::int64_t> load_lifting_sizes(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("load_lifting_sizes: cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("load_lifting_sizes: " + path + ": " + e.what());
    }
    if (!doc.contains("lifting_sizes") || !doc["lifting_sizes"].is_array()) {
        throw ParseError("load_lifting_sizes: " + path +
                         ": missing 'lifting_sizes' array");
    }
    std::vector<std::int64_t> out;
    for (const auto& v : doc["lifting_sizes"]) {
        if (!v.is_number_integer()) {
            throw ParseError("load_lifting_sizes: non-integer entry in " + path);
        }
        out.push_back(v.get<std::int64_t>());
    }
    if (out.empty()) {
        throw ParseError("load_lifting_sizes: empty set in " + path);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] <= 0 || (i > 0 && out[i] <= out[i - 1])) {
            throw ParseError(
                "load_lifting_sizes: entries must be positive and ascending in " +
                path);
        }
    }
    return out;
}

}  // namespace nrl2sm
