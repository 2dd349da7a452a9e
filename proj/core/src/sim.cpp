// SPDX-License-Identifier: Apache-2.0
#include "nrl2sm/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "nrl2sm/errors.hpp"
#include "nrl2sm/ldpc.hpp"

namespace nrl2sm {

using nlohmann::json;

const char* to_string(McsMode m) {
    switch (m) {
        case McsMode::Fixed: return "fixed";
        case McsMode::Adaptive: return "adaptive";
    }
    throw InvalidInputError("unknown McsMode");
}

McsMode mcs_mode_from_string(const std::string& s) {
    if (s == "fixed") return McsMode::Fixed;
    if (s == "adaptive") return McsMode::Adaptive;
    throw ParseError("unknown MCS mode '" + s + "' (expected fixed|adaptive)");
}

double SimConfig::mean_snr_db() const {
    if (!channel.distance_m) return channel.mean_snr_db;
    return channel.ref_snr_db -
           10.0 * channel.pathloss_exponent *
               std::log10(*channel.distance_m / channel.ref_distance_m);
}

int SimConfig::n_packets() const {
    return static_cast<int>(traffic.duration_s * 1000.0 / traffic.interval_ms);
}

void SimConfig::validate() const {
    if (mcs.mode == McsMode::Fixed) {
        McsTableSet::builtin().lookup(McsId{mcs.table, mcs.index});
    }
    if (!(mcs.target_tbler > 0.0) || !(mcs.target_tbler < 1.0)) {
        throw InvalidConfigError("mcs.target_tbler must be in (0,1)");
    }
    if (harq.max_retx < 0 || harq.max_retx > 7) {
        throw InvalidConfigError("harq.max_retx must be in 0..7");
    }
    if (channel.coherence_rbs < 1) {
        throw InvalidConfigError("channel.coherence_rbs must be >= 1");
    }
    if (channel.coherence_packets < 0) {
        throw InvalidConfigError(
            "channel.coherence_packets must be >= 0 (0 freezes the channel)");
    }
    if (channel.distance_m && !(*channel.distance_m > 0.0)) {
        throw InvalidConfigError("channel.distance_m must be > 0");
    }
    if (!(channel.ref_distance_m > 0.0)) {
        throw InvalidConfigError("channel.ref_distance_m must be > 0");
    }
    if (allocation.n_rbs < 1) {
        throw InvalidConfigError("allocation.n_rbs must be >= 1");
    }
    if (allocation.n_symbols < 2) {
        throw InvalidConfigError("allocation.n_symbols must be >= 2");
    }
    if (!(allocation.scs_khz > 0.0)) {
        throw InvalidConfigError("allocation.scs_khz must be > 0");
    }
    if (traffic.packet_bytes < 1) {
        throw InvalidConfigError("traffic.packet_bytes must be >= 1");
    }
    if (!(traffic.interval_ms > 0.0) || !(traffic.duration_s > 0.0)) {
        throw InvalidConfigError("traffic interval and duration must be > 0");
    }
    if (n_packets() < 1) {
        throw InvalidConfigError(
            "traffic.duration_s / traffic.interval_ms yields no packets");
    }
    if (latencies.proc_slots < 0 || latencies.feedback_slots < 0) {
        throw InvalidConfigError("latency slot counts must be >= 0");
    }
    if (latencies.decode_us < 0.0 || latencies.reorder_ms < 0.0) {
        throw InvalidConfigError("latency durations must be >= 0");
    }
}

json sim_config_to_json(const SimConfig& c) {
    json channel = {{"mean_snr_db", c.channel.mean_snr_db},
                    {"pathloss_exponent", c.channel.pathloss_exponent},
                    {"ref_snr_db", c.channel.ref_snr_db},
                    {"ref_distance_m", c.channel.ref_distance_m},
                    {"coherence_rbs", c.channel.coherence_rbs},
                    {"coherence_packets", c.channel.coherence_packets}};
    if (c.channel.distance_m) channel["distance_m"] = *c.channel.distance_m;
    return {
        {"seed", c.seed},
        {"mcs",
         {{"mode", to_string(c.mcs.mode)},
          {"table", to_string(c.mcs.table)},
          {"index", c.mcs.index},
          {"policy", to_string(c.mcs.policy)},
          {"target_tbler", c.mcs.target_tbler}}},
        {"harq",
         {{"method", to_string(c.harq.method)},
          {"max_retx", c.harq.max_retx},
          {"ir_ecr_mode", to_string(c.harq.ir_ecr_mode)}}},
        {"channel", std::move(channel)},
        {"allocation",
         {{"n_rbs", c.allocation.n_rbs},
          {"n_symbols", c.allocation.n_symbols},
          {"scs_khz", c.allocation.scs_khz}}},
        {"traffic",
         {{"packet_bytes", c.traffic.packet_bytes},
          {"interval_ms", c.traffic.interval_ms},
          {"duration_s", c.traffic.duration_s}}},
        {"latencies",
         {{"proc_slots", c.latencies.proc_slots},
          {"decode_us", c.latencies.decode_us},
          {"feedback_slots", c.latencies.feedback_slots},
          {"reorder_ms", c.latencies.reorder_ms}}},
        {"lut_path", c.lut_path}};
}

namespace {

[[noreturn]] void unknown_key(const std::string& scope, const std::string& key) {
    throw ParseError("config: unknown key '" +
                     (scope.empty() ? key : scope + "." + key) + "'");
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: bad value for '") + key +
                         "': " + e.what());
    }
}

void read_enum_field(const json& obj, const char* key,
                     const std::function<void(const std::string&)>& set) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_string()) {
        throw ParseError(std::string("config: '") + key + "' must be a string");
    }
    set(obj.at(key).get<std::string>());
}

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) unknown_key(scope, key);
    }
}

}  // namespace

SimConfig sim_config_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw ParseError("config: top level must be an object");
    }
    check_keys(doc, "",
               {"seed", "mcs", "harq", "channel", "allocation", "traffic",
                "latencies", "lut_path"});
    SimConfig c;
    read_field(doc, "seed", c.seed);
    read_field(doc, "lut_path", c.lut_path);

    if (doc.contains("mcs")) {
        const json& m = doc.at("mcs");
        check_keys(m, "mcs", {"mode", "table", "index", "policy", "target_tbler"});
        read_enum_field(m, "mode", [&](const std::string& s) {
            c.mcs.mode = mcs_mode_from_string(s);
        });
        read_enum_field(m, "table", [&](const std::string& s) {
            c.mcs.table = mcs_table_from_string(s);
        });
        read_field(m, "index", c.mcs.index);
        read_enum_field(m, "policy", [&](const std::string& s) {
            c.mcs.policy = link_adapt_policy_from_string(s);
        });
        read_field(m, "target_tbler", c.mcs.target_tbler);
    }
    if (doc.contains("harq")) {
        const json& h = doc.at("harq");
        check_keys(h, "harq", {"method", "max_retx", "ir_ecr_mode"});
        read_enum_field(h, "method", [&](const std::string& s) {
            c.harq.method = harq_method_from_string(s);
        });
        read_field(h, "max_retx", c.harq.max_retx);
        read_enum_field(h, "ir_ecr_mode", [&](const std::string& s) {
            c.harq.ir_ecr_mode = ir_ecr_mode_from_string(s);
        });
    }
    if (doc.contains("channel")) {
        const json& ch = doc.at("channel");
        check_keys(ch, "channel",
                   {"mean_snr_db", "distance_m", "pathloss_exponent",
                    "ref_snr_db", "ref_distance_m", "coherence_rbs",
                    "coherence_packets"});
        read_field(ch, "mean_snr_db", c.channel.mean_snr_db);
        if (ch.contains("distance_m") && !ch.at("distance_m").is_null()) {
            c.channel.distance_m = ch.at("distance_m").get<double>();
        }
        read_field(ch, "pathloss_exponent", c.channel.pathloss_exponent);
        read_field(ch, "ref_snr_db", c.channel.ref_snr_db);
        read_field(ch, "ref_distance_m", c.channel.ref_distance_m);
        read_field(ch, "coherence_rbs", c.channel.coherence_rbs);
        read_field(ch, "coherence_packets", c.channel.coherence_packets);
    }
    if (doc.contains("allocation")) {
        const json& a = doc.at("allocation");
        check_keys(a, "allocation", {"n_rbs", "n_symbols", "scs_khz"});
        read_field(a, "n_rbs", c.allocation.n_rbs);
        read_field(a, "n_symbols", c.allocation.n_symbols);
        read_field(a, "scs_khz", c.allocation.scs_khz);
    }
    if (doc.contains("traffic")) {
        const json& t = doc.at("traffic");
        check_keys(t, "traffic", {"packet_bytes", "interval_ms", "duration_s"});
        read_field(t, "packet_bytes", c.traffic.packet_bytes);
        read_field(t, "interval_ms", c.traffic.interval_ms);
        read_field(t, "duration_s", c.traffic.duration_s);
    }
    if (doc.contains("latencies")) {
        const json& l = doc.at("latencies");
        check_keys(l, "latencies",
                   {"proc_slots", "decode_us", "feedback_slots", "reorder_ms"});
        read_field(l, "proc_slots", c.latencies.proc_slots);
        read_field(l, "decode_us", c.latencies.decode_us);
        read_field(l, "feedback_slots", c.latencies.feedback_slots);
        read_field(l, "reorder_ms", c.latencies.reorder_ms);
    }
    c.validate();
    return c;
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("config: cannot open " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("config: " + path + ": " + e.what());
    }
    return sim_config_from_json(doc);
}

void apply_config_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParseError("override '" + assignment + "' is not key=value");
    }
    const std::string dotted = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json* node = &doc;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', begin);
        const std::string part = dotted.substr(
            begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (part.empty()) {
            throw ParseError("override '" + assignment + "' has an empty key part");
        }
        if (dot == std::string::npos) {
            json value;
            try {
                value = json::parse(raw);
            } catch (const json::exception&) {
                value = raw;  // bare strings stay strings
            }
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        begin = dot + 1;
    }
}

SinrSpectrum channel_step(ChannelState& state, const SimConfig& config,
                          Pcg32& rng, bool new_packet) {
    const int n_rbs = config.allocation.n_rbs;
    const int coh = config.channel.coherence_rbs;
    const bool frozen = config.channel.coherence_packets == 0;

    bool redraw = false;
    if (!state.initialized) {
        redraw = true;
    } else if (!frozen) {
        if (new_packet) {
            redraw = state.packets_on_draw >= config.channel.coherence_packets;
        } else {
            redraw = true;  // fresh fading per retransmission
        }
    }

    if (redraw) {
        state.gains.resize(static_cast<std::size_t>(n_rbs));
        const int n_blocks = (n_rbs + coh - 1) / coh;
        for (int blk = 0; blk < n_blocks; ++blk) {
            const double g = -std::log(1.0 - rng.next_double());
            const int begin = blk * coh;
            const int end = std::min(n_rbs, begin + coh);
            std::fill(state.gains.begin() + begin, state.gains.begin() + end, g);
        }
        state.initialized = true;
        state.packets_on_draw = 0;
    }
    if (new_packet) state.packets_on_draw += 1;

    const double snr = std::pow(10.0, config.mean_snr_db() / 10.0);
    SinrSpectrum spectrum;
    spectrum.values.resize(state.gains.size());
    for (std::size_t i = 0; i < state.gains.size(); ++i) {
        spectrum.values[i] = state.gains[i] * snr;
    }
    return spectrum;
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
    // Nearest-rank on the sorted sample.
    const std::size_t n = sorted.size();
    const std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
    return sorted[std::min(n - 1, std::max<std::size_t>(1, rank) - 1)];
}

}  // namespace

SimMetrics run_simulation(const SimConfig& config, const BlerLut& lut,
                          const McsTableSet& tables) {
    config.validate();

    Pcg32 root(config.seed);
    Pcg32 channel_rng = root.split(1);
    Pcg32 decode_rng = root.split(2);

    const double slot = config.slot_ms();
    // One attempt: processing, one transmission slot, decoding. Failed
    // attempts add the NACK turnaround before the next one.
    const double attempt_ms = config.latencies.proc_slots * slot + slot +
                              config.latencies.decode_us / 1000.0;
    const double turnaround_ms = config.latencies.feedback_slots * slot;

    const std::int64_t packet_bits = 8LL * config.traffic.packet_bytes;
    const std::int64_t n_re = 12LL * (config.allocation.n_symbols - 1) *
                              config.allocation.n_rbs;

    SimMetrics m;
    ChannelState channel;
    const int n_packets = config.n_packets();
    m.trace.reserve(static_cast<std::size_t>(n_packets));

    std::map<int, std::uint64_t> mcs_histogram;
    std::vector<double> delays;
    bool prev_lost = false;

    for (int p = 0; p < n_packets; ++p) {
        SinrSpectrum spectrum = channel_step(channel, config, channel_rng, true);

        McsId mcs{config.mcs.table, config.mcs.index};
        if (config.mcs.mode == McsMode::Adaptive) {
            const LinkAdaptResult sel =
                config.mcs.policy == LinkAdaptPolicy::ErrorModel
                    ? select_mcs_error_model(spectrum, config.mcs.table,
                                             config.mcs.target_tbler, lut,
                                             tables,
                                             {0, config.allocation.n_symbols})
                    : select_mcs_shannon(spectrum, config.mcs.table, tables);
            mcs = McsId{sel.table, sel.mcs_index};
        }
        const McsEntry& entry = tables.lookup(mcs);
        const std::int64_t tbs = tbs_calculate(
            config.allocation.n_rbs, config.allocation.n_symbols, entry);
        if (tbs < packet_bits) {
            throw InvalidConfigError(
                "packet of " + std::to_string(config.traffic.packet_bytes) +
                " bytes does not fit the transport block (" +
                std::to_string(tbs) + " bits at " +
                std::string(to_string(mcs.table)) + "/MCS" +
                std::to_string(mcs.index) + ", " +
                std::to_string(config.allocation.n_rbs) + " RBs)");
        }
        const std::uint64_t coded_bits =
            static_cast<std::uint64_t>(n_re) * entry.modulation_order;

        HarqHistory history;
        history.method = config.harq.method;
        history.mcs = mcs;
        history.info_bits = static_cast<std::uint64_t>(tbs);

        PacketRecord rec;
        rec.packet = static_cast<std::uint32_t>(p);
        rec.send_time_ms = p * config.traffic.interval_ms;
        rec.mcs_index = mcs.index;

        CombineOptions combine;
        combine.ir_ecr_mode = config.harq.ir_ecr_mode;
        combine.coded_bits_current = coded_bits;

        bool delivered = false;
        int attempts = 0;
        for (int a = 0; a <= config.harq.max_retx; ++a) {
            const L2smOutput out =
                compute_tbler(spectrum, mcs, tbs, history, lut, tables, combine);
            if (a == 0) rec.first_tbler = out.tbler;
            attempts += 1;
            m.phy_attempts += 1;
            if (draw_decode(out.tbler, decode_rng)) {
                delivered = true;
                break;
            }
            m.phy_failures += 1;
            if (a < config.harq.max_retx) {
                history =
                    update_history(history, spectrum, entry.beta, coded_bits);
                spectrum = channel_step(channel, config, channel_rng, false);
            }
        }

        rec.attempts = attempts;
        rec.delivered = delivered;
        m.packets_sent += 1;
        if (delivered) {
            double delay = attempts * attempt_ms + (attempts - 1) * turnaround_ms;
            if (prev_lost) {
                delay += config.latencies.reorder_ms;
                rec.reorder_penalized = true;
            }
            rec.delay_ms = delay;
            delays.push_back(delay);
            m.packets_delivered += 1;
        } else {
            rec.delay_ms = std::nan("");
            m.packets_lost += 1;
        }
        prev_lost = !delivered;
        mcs_histogram[mcs.index] += 1;
        m.trace.push_back(std::move(rec));
    }

    m.app_loss_pct = 100.0 * static_cast<double>(m.packets_lost) /
                     static_cast<double>(m.packets_sent);
    m.phy_loss_pct = m.phy_attempts == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(m.phy_failures) /
                               static_cast<double>(m.phy_attempts);

    if (delays.empty()) {
        m.delay_mean_ms = m.delay_min_ms = m.delay_max_ms = m.delay_p50_ms =
            m.delay_p95_ms = std::nan("");
    } else {
        std::sort(delays.begin(), delays.end());
        double sum = 0.0;
        for (double d : delays) sum += d;
        m.delay_mean_ms = sum / static_cast<double>(delays.size());
        m.delay_min_ms = delays.front();
        m.delay_max_ms = delays.back();
        m.delay_p50_ms = percentile(delays, 0.50);
        m.delay_p95_ms = percentile(delays, 0.95);
    }

    std::uint64_t best_count = 0;
    for (const auto& [idx, count] : mcs_histogram) {
        if (count > best_count) {  // map order makes ties resolve to lowest
            best_count = count;
            m.mcs_mode_stat = idx;
        }
    }
    return m;
}

SimMetrics run_simulation(const SimConfig& config) {
    config.validate();
    const McsTableSet& tables = McsTableSet::builtin();
    if (config.lut_path.empty()) {
        const BlerLut lut = generate_synthetic_lut(tables, default_cbs_grid(),
                                                   default_sinr_grid_db());
        return run_simulation(config, lut, tables);
    }
    const BlerLut lut = load_lut(config.lut_path);
    return run_simulation(config, lut, tables);
}

std::vector<SimMetrics> run_sweep(const std::vector<SimConfig>& configs) {
    std::vector<std::future<SimMetrics>> futures;
    futures.reserve(configs.size());
    for (const SimConfig& c : configs) {
        futures.push_back(std::async(std::launch::async,
                                     [c]() { return run_simulation(c); }));
    }
    std::vector<SimMetrics> out;
    out.reserve(configs.size());
    for (auto& f : futures) {
        out.push_back(f.get());
    }
    return out;
}

std::vector<std::int64_t> default_cbs_grid() {
    return {24, 56, 120, 280, 640, 1320, 2560, 3840, 5280, 8448};
}

std::vector<double> default_sinr_grid_db() {
    std::vector<double> grid;
    grid.reserve(111);
    for (int i = 0; i <= 110; ++i) {
        grid.push_back(-10.0 + 0.5 * i);
    }
    return grid;
}

EmitFormat emit_format_from_string(const std::string& s) {
    if (s == "csv") return EmitFormat::Csv;
    if (s == "json") return EmitFormat::Json;
    throw ParseError("unknown output format '" + s + "' (expected csv|json)");
}

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string mcs_label(const SimConfig& c) {
    if (c.mcs.mode == McsMode::Fixed) {
        return std::to_string(c.mcs.index);
    }
    return std::string("adaptive-") + to_string(c.mcs.policy);
}

json metrics_to_json(const SimConfig& c, const SimMetrics& m) {
    auto num = [](double v) {
        return std::isnan(v) ? json() : json(v);
    };
    return {{"seed", c.seed},
            {"mcs_table", to_string(c.mcs.table)},
            {"mcs", mcs_label(c)},
            {"harq", to_string(c.harq.method)},
            {"max_retx", c.harq.max_retx},
            {"mean_snr_db", c.mean_snr_db()},
            {"packets_sent", m.packets_sent},
            {"packets_delivered", m.packets_delivered},
            {"packets_lost", m.packets_lost},
            {"app_loss_pct", m.app_loss_pct},
            {"phy_attempts", m.phy_attempts},
            {"phy_failures", m.phy_failures},
            {"phy_loss_pct", m.phy_loss_pct},
            {"delay_mean_ms", num(m.delay_mean_ms)},
            {"delay_min_ms", num(m.delay_min_ms)},
            {"delay_max_ms", num(m.delay_max_ms)},
            {"delay_p50_ms", num(m.delay_p50_ms)},
            {"delay_p95_ms", num(m.delay_p95_ms)},
            {"mcs_mode_stat", m.mcs_mode_stat}};
}

}  // namespace

void emit_results(const std::vector<SimConfig>& configs,
                  const std::vector<SimMetrics>& metrics, EmitFormat format,
                  std::ostream& out) {
    if (configs.size() != metrics.size()) {
        throw InvalidInputError("emit_results: configs/metrics size mismatch");
    }

    if (format == EmitFormat::Json) {
        json rows = json::array();
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            rows.push_back(metrics_to_json(configs[i], metrics[i]));
        }
        out << json{{"version", 1}, {"results", std::move(rows)}}.dump(1)
            << "\n";
    } else {
        out << "seed,mcs_table,mcs,harq,max_retx,mean_snr_db,packets_sent,"
               "packets_delivered,packets_lost,app_loss_pct,phy_attempts,"
               "phy_failures,phy_loss_pct,delay_mean_ms,delay_min_ms,"
               "delay_max_ms,delay_p50_ms,delay_p95_ms,mcs_mode_stat\n";
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const SimConfig& c = configs[i];
            const SimMetrics& m = metrics[i];
            out << c.seed << ',' << to_string(c.mcs.table) << ','
                << mcs_label(c) << ',' << to_string(c.harq.method) << ','
                << c.harq.max_retx << ',' << fmt_double(c.mean_snr_db()) << ','
                << m.packets_sent << ',' << m.packets_delivered << ','
                << m.packets_lost << ',' << fmt_double(m.app_loss_pct) << ','
                << m.phy_attempts << ',' << m.phy_failures << ','
                << fmt_double(m.phy_loss_pct) << ','
                << fmt_double(m.delay_mean_ms) << ','
                << fmt_double(m.delay_min_ms) << ','
                << fmt_double(m.delay_max_ms) << ','
                << fmt_double(m.delay_p50_ms) << ','
                << fmt_double(m.delay_p95_ms) << ',' << m.mcs_mode_stat << "\n";
        }
    }
    if (!out) {
        throw GenerationError("emit_results: stream write failed");
    }
}

void emit_results(const std::vector<SimConfig>& configs,
                  const std::vector<SimMetrics>& metrics, EmitFormat format,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw GenerationError("emit_results: cannot open " + path);
    }
    emit_results(configs, metrics, format, out);
    if (!out) {
        throw GenerationError("emit_results: write to " + path + " failed");
    }
}

void emit_trace(const SimMetrics& metrics, std::ostream& out) {
    out << "packet,send_time_ms,mcs_index,attempts,delivered,delay_ms,"
           "first_tbler,reorder_penalized\n";
    for (const PacketRecord& r : metrics.trace) {
        out << r.packet << ',' << fmt_double(r.send_time_ms) << ','
            << r.mcs_index << ',' << r.attempts << ',' << (r.delivered ? 1 : 0)
            << ',' << fmt_double(r.delay_ms) << ',' << fmt_double(r.first_tbler)
            << ',' << (r.reorder_penalized ? 1 : 0) << "\n";
    }
    if (!out) {
        throw GenerationError("emit_trace: stream write failed");
    }
}

void emit_trace(const SimMetrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw GenerationError("emit_trace: cannot open " + path);
    }
    emit_trace(metrics, out);
    if (!out) {
        throw GenerationError("emit_trace: write to " + path + " failed");
    }
}

}  // namespace nrl2sm
