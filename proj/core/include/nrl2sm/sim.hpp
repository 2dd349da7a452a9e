// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nrl2sm/allocation.hpp"
#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/eesm.hpp"
#include "nrl2sm/error_model.hpp"
#include "nrl2sm/link_adaptation.hpp"
#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/rng.hpp"

namespace nrl2sm {

enum class McsMode { Fixed, Adaptive };

const char* to_string(McsMode m);
McsMode mcs_mode_from_string(const std::string& s);

struct SimConfig {
    std::uint64_t seed = 1;

    struct Mcs {
        McsMode mode = McsMode::Fixed;
        McsTableId table = McsTableId::Table2;
        int index = 7;  // fixed mode
        LinkAdaptPolicy policy = LinkAdaptPolicy::ErrorModel;  // adaptive mode
        double target_tbler = 0.1;
    } mcs;

    struct Harq {
        HarqMethod method = HarqMethod::ChaseComb;
        int max_retx = 3;  // retransmissions after the first attempt, 0..7
        IrEcrMode ir_ecr_mode = IrEcrMode::Auto;
    } harq;

    struct Channel {
        double mean_snr_db = 20.0;
        // When set, overrides mean_snr_db through log-distance pathloss:
        // snr = ref_snr_db - 10*exponent*log10(d / ref_distance_m).
        std::optional<double> distance_m;
        double pathloss_exponent = 3.0;
        double ref_snr_db = 45.0;
        double ref_distance_m = 10.0;
        int coherence_rbs = 4;     // RBs sharing one fading block
        int coherence_packets = 1; // packets per redraw; 0 freezes the channel
    } channel;

    struct Allocation {
        int n_rbs = 132;
        int n_symbols = 12;  // includes the DMRS symbol
        double scs_khz = 120.0;
    } allocation;

    struct Traffic {
        int packet_bytes = 100;
        double interval_ms = 200.0;
        double duration_s = 50.0;
    } traffic;

    struct Latencies {
        int proc_slots = 2;        // PHY-MAC processing per attempt
        double decode_us = 100.0;  // decoder latency per attempt
        int feedback_slots = 4;    // NACK turnaround between attempts
        double reorder_ms = 10.0;  // reordering-window penalty
    } latencies;

    std::string lut_path;  // empty: built-in synthetic LUT

    double mean_snr_db() const;  // resolves the distance mapping
    double slot_ms() const { return 15.0 / allocation.scs_khz; }
    int n_packets() const;
    void validate() const;  // throws InvalidConfigError
};

// JSON round trip and dotted overrides ("channel.mean_snr_db=12.5").
// Every SimConfig field is addressable; unknown keys are rejected.
nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& doc);
SimConfig load_sim_config(const std::string& path);
void apply_config_override(nlohmann::json& doc, const std::string& assignment);

struct PacketRecord {
    std::uint32_t packet = 0;
    double send_time_ms = 0.0;
    int mcs_index = 0;
    int attempts = 0;
    bool delivered = false;
    double delay_ms = 0.0;  // NaN when lost
    double first_tbler = 1.0;
    bool reorder_penalized = false;
};

struct SimMetrics {
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t packets_lost = 0;
    double app_loss_pct = 0.0;

    std::uint64_t phy_attempts = 0;
    std::uint64_t phy_failures = 0;
    double phy_loss_pct = 0.0;

    // Over delivered packets; NaN when none got through.
    double delay_mean_ms = 0.0;
    double delay_min_ms = 0.0;
    double delay_max_ms = 0.0;
    double delay_p50_ms = 0.0;
    double delay_p95_ms = 0.0;

    int mcs_mode_stat = 0;  // most frequently selected MCS, ties to lowest

    std::vector<PacketRecord> trace;
};

// Block-fading channel generator state. Gains are unit-mean exponential
// (Rayleigh power), constant over coherence_rbs-sized RB blocks, redrawn
// every coherence_packets packets and on every retransmission; a
// coherence_packets of 0 freezes the first draw for the whole run.
struct ChannelState {
    std::vector<double> gains;
    bool initialized = false;
    int packets_on_draw = 0;  // packets that used the current draw
};

// One channel advance; `new_packet` marks first attempts (retransmissions
// pass false). Returns per-RB linear SINRs scaled to the config's mean
// SNR. Deterministic given rng state.
SinrSpectrum channel_step(ChannelState& state, const SimConfig& config,
                          Pcg32& rng, bool new_packet);

// Sequential packet loop: per packet MCS selection (fixed or adaptive),
// TBS derivation, HARQ attempts through the error model, delay and loss
// accounting. Bit-identical results for identical config. The LUT and
// tables are loaded per config (lut_path empty means the built-in
// synthetic LUT over default grids).
SimMetrics run_simulation(const SimConfig& config);

// As run_simulation, with LUT/tables supplied by the caller (reused
// across sweep points).
SimMetrics run_simulation(const SimConfig& config, const BlerLut& lut,
                          const McsTableSet& tables);

// Independent parallel replications, results in config order.
std::vector<SimMetrics> run_sweep(const std::vector<SimConfig>& configs);

// Default synthetic-LUT grids (shared by run_simulation and the LUT
// generation tooling).
std::vector<std::int64_t> default_cbs_grid();
std::vector<double> default_sinr_grid_db();

enum class EmitFormat { Csv, Json };

EmitFormat emit_format_from_string(const std::string& s);

// One results row per config; stable column order, deterministic bytes.
void emit_results(const std::vector<SimConfig>& configs,
                  const std::vector<SimMetrics>& metrics, EmitFormat format,
                  std::ostream& out);
void emit_results(const std::vector<SimConfig>& configs,
                  const std::vector<SimMetrics>& metrics, EmitFormat format,
                  const std::string& path);

// Per-packet trace as CSV.
void emit_trace(const SimMetrics& metrics, std::ostream& out);
void emit_trace(const SimMetrics& metrics, const std::string& path);

}  // namespace nrl2sm
