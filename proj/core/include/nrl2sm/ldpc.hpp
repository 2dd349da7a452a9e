// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrl2sm/rational.hpp"

namespace nrl2sm {

enum class BaseGraph { BG1, BG2 };

const char* to_string(BaseGraph bg);
BaseGraph base_graph_from_string(const std::string& s);

// Maximum code block size in bits before segmentation triggers.
std::int64_t max_code_block_size(BaseGraph bg);  // 8448 (BG1) / 3840 (BG2)

struct SegmentationResult {
    BaseGraph base_graph = BaseGraph::BG1;
    std::int64_t num_code_blocks = 1;   // C
    std::int64_t code_block_size = 0;   // K, bits
    std::int64_t lifting_size = 0;      // Z_c
    std::int64_t tb_with_crc = 0;       // B, bits
    std::int64_t per_cb_crc = 0;        // L: 24 when C > 1, else 0
};

// Largest transport block size accepted by segment() by default.
inline constexpr std::int64_t kDefaultMaxTbs = 1'277'992;

// BG2 iff (A <= 292) or (R <= 0.25) or (A <= 3824 and R <= 0.67);
// otherwise BG1. Thresholds compared exactly as rationals.
BaseGraph select_base_graph(std::int64_t tbs, const Rational& ecr);

// Transport-block CRC length: 24 bits when A > 3824, else 16.
std::int64_t tb_crc_length(std::int64_t tbs);

// Code block segmentation. B = A + tb_crc_length(A); one block when
// B <= K_cb, otherwise C = ceil(B / (K_cb - 24)) blocks with a 24-bit CRC
// each; the lifting size is the smallest standard value Z_c with
// K_b * Z_c >= ceil(B'/C) and K = 22*Z_c (BG1) or 10*Z_c (BG2).
// Throws UnsupportedSizeError when tbs exceeds max_tbs.
SegmentationResult segment(std::int64_t tbs, BaseGraph bg,
                           std::int64_t max_tbs = kDefaultMaxTbs);

// Transport BLER from per-code-block BLER: 1 - (1 - cbler)^C.
double transport_bler(double cbler, std::int64_t num_code_blocks);

// The 51 standard LDPC lifting sizes, ascending.
const std::vector<std::int64_t>& standard_lifting_sizes();

// Load a lifting-size set from a JSON file {version, lifting_sizes:[...]}.
// Values must be positive, unique and ascending.
std::vector<std::int64_t> load_lifting_sizes(const std::string& path);

}  // namespace nrl2sm
