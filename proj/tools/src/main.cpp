// SPDX-License-Identifier: Apache-2.0
//
// nrl2sm command line front end.
//
//   simulate   run the link simulator (config file + dotted overrides, sweeps)
//   calibrate  fit the EESM beta for an ensemble of fading realizations
//   genlut     generate a synthetic SINR->BLER lookup table
//   validate   lint LUT and config files
//
// Exit status 0 on success; config/LUT/data errors print a diagnostic to
// stderr and exit nonzero.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nrl2sm/bler_lut.hpp"
#include "nrl2sm/calibration.hpp"
#include "nrl2sm/errors.hpp"
#include "nrl2sm/mcs_tables.hpp"
#include "nrl2sm/sim.hpp"

namespace {

using nlohmann::json;
using namespace nrl2sm;

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) {
        throw InvalidInputError(what + ": not a number: '" + s + "'");
    }
    return v;
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& what) {
    std::vector<double> out;
    for (const std::string& item : split_list(s, ',')) {
        out.push_back(parse_double(item, what));
    }
    if (out.empty()) throw InvalidInputError(what + ": empty list");
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s,
                                         const std::string& what) {
    std::vector<std::int64_t> out;
    for (const std::string& item : split_list(s, ',')) {
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || item.empty()) {
            throw InvalidInputError(what + ": not an integer: '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw InvalidInputError(what + ": empty list");
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return doc;
}

// Writes to stdout when path is "-" or empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw GenerationError("cannot open " + path);
    fn(out);
    if (!out) throw GenerationError("write to " + path + " failed");
}

struct SimulateArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::vector<std::string> sweeps;
    std::string output = "-";
    std::string format = "csv";
    std::string trace_path;
    bool print_config = false;
};

int cmd_simulate(const SimulateArgs& args) {
    json base = args.config_path.empty() ? sim_config_to_json(SimConfig{})
                                         : read_json_file(args.config_path);
    for (const std::string& assignment : args.sets) {
        apply_config_override(base, assignment);
    }

    if (args.print_config) {
        SimConfig config = sim_config_from_json(base);
        config.validate();
        with_output(args.output, [&](std::ostream& out) {
            out << sim_config_to_json(config).dump(1) << "\n";
        });
        return 0;
    }

    // Cartesian sweep expansion, axes in flag order.
    std::vector<json> docs{base};
    for (const std::string& axis : args.sweeps) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InvalidInputError("--sweep expects KEY=V1,V2,...: '" + axis +
                                    "'");
        }
        const std::string key = axis.substr(0, eq);
        const std::vector<std::string> values =
            split_list(axis.substr(eq + 1), ',');
        if (values.empty()) {
            throw InvalidInputError("--sweep " + key + ": empty value list");
        }
        std::vector<json> next;
        next.reserve(docs.size() * values.size());
        for (const json& doc : docs) {
            for (const std::string& value : values) {
                json copy = doc;
                apply_config_override(copy, key + "=" + value);
                next.push_back(std::move(copy));
            }
        }
        docs = std::move(next);
    }

    std::vector<SimConfig> configs;
    configs.reserve(docs.size());
    for (const json& doc : docs) {
        SimConfig config = sim_config_from_json(doc);
        config.validate();
        configs.push_back(config);
    }

    if (!args.trace_path.empty() && configs.size() != 1) {
        throw InvalidInputError("--trace requires a single config (no sweep)");
    }

    const std::vector<SimMetrics> metrics = run_sweep(configs);

    const EmitFormat format = emit_format_from_string(args.format);
    with_output(args.output, [&](std::ostream& out) {
        emit_results(configs, metrics, format, out);
    });
    if (!args.trace_path.empty()) {
        emit_trace(metrics.front(), args.trace_path);
    }
    return 0;
}

struct CalibrateArgs {
    std::string ensemble_path;
    bool synth = false;
    std::string table = "1";
    int mcs_index = 0;
    int channels = 50;
    std::string noise_grid = "-10,-5,0,5,10";
    int n_rbs = 132;
    int coherence_rbs = 4;
    std::uint64_t seed = 1;
    std::optional<double> planted_beta;
    std::string export_ensemble;
    std::string lut_path;
    std::int64_t ref_cbs = 3840;
    BetaSearch search;
    std::string output = "-";
};

int cmd_calibrate(const CalibrateArgs& args) {
    const McsTableSet& tables = McsTableSet::builtin();

    std::optional<BlerLut> lut;
    if (!args.lut_path.empty()) lut = load_lut(args.lut_path);

    CalibrationEnsemble ensemble;
    if (!args.ensemble_path.empty()) {
        ensemble = load_ensemble(args.ensemble_path);
    } else if (args.synth) {
        const McsId mcs{mcs_table_from_string(args.table), args.mcs_index};
        FadingParams fading;
        fading.n_rbs = args.n_rbs;
        fading.coherence_rbs = args.coherence_rbs;
        fading.seed = args.seed;
        std::function<double(double)> ref;
        if (lut) ref = make_awgn_ref_lut(*lut, mcs, args.ref_cbs);
        ensemble = gen_fading_ensemble(
            mcs, args.channels, parse_double_list(args.noise_grid, "--noise-grid"),
            fading, tables, ref, args.planted_beta);
    } else {
        throw InvalidInputError(
            "calibrate needs --ensemble FILE or --synth");
    }

    if (!ensemble.awgn_ref) {
        // Loaded ensembles carry no reference curve; attach one.
        ensemble.awgn_ref =
            lut ? make_awgn_ref_lut(*lut, ensemble.mcs, args.ref_cbs)
                : make_awgn_ref_synth(tables.lookup(ensemble.mcs), args.ref_cbs);
    }

    if (!args.export_ensemble.empty()) {
        save_ensemble(ensemble, args.export_ensemble);
    }

    const CalibrationResult result = calibrate_beta(ensemble, args.search);

    json report{{"beta_opt", result.beta_opt},
                {"objective_value", result.objective_value},
                {"evaluations", result.search_trace.size()},
                {"beta_insensitive", result.beta_insensitive},
                {"at_boundary", result.at_boundary},
                {"mcs",
                 {{"table_id", to_string(ensemble.mcs.table)},
                  {"index", ensemble.mcs.index}}},
                {"realizations", ensemble.realizations.size()},
                {"dropped_samples", ensemble.dropped_samples}};
    with_output(args.output,
                [&](std::ostream& out) { out << report.dump(1) << "\n"; });
    return 0;
}

struct GenlutArgs {
    std::string output = "bler_lut.json";
    std::uint64_t seed = 0;
    std::string cbs_grid;
    double sinr_min = -10.0;
    double sinr_max = 45.0;
    double sinr_step = 0.5;
};

int cmd_genlut(const GenlutArgs& args) {
    std::vector<std::int64_t> cbs =
        args.cbs_grid.empty() ? default_cbs_grid()
                              : parse_int_list(args.cbs_grid, "--cbs-grid");
    std::vector<double> sinr;
    if (args.sinr_step <= 0.0 || args.sinr_max < args.sinr_min) {
        throw InvalidInputError("genlut: need sinr_min <= sinr_max, step > 0");
    }
    for (double v = args.sinr_min; v <= args.sinr_max + 1e-9;
         v += args.sinr_step) {
        sinr.push_back(v);
    }

    const BlerLut lut = generate_synthetic_lut(McsTableSet::builtin(), cbs,
                                               sinr, args.seed);
    save_lut(lut, args.output);
    std::cerr << "wrote " << args.output << ": " << lut.num_keys()
              << " MCS keys, " << cbs.size() << " CBS curves each, "
              << sinr.size() << " SINR points\n";
    return 0;
}

struct ValidateArgs {
    std::vector<std::string> luts;
    std::vector<std::string> configs;
    std::vector<std::string> ensembles;
};

int cmd_validate(const ValidateArgs& args) {
    if (args.luts.empty() && args.configs.empty() && args.ensembles.empty()) {
        throw InvalidInputError(
            "validate needs at least one --lut, --config, or --ensemble");
    }
    int failures = 0;
    const auto check = [&](const std::string& kind, const std::string& path,
                           auto&& load) {
        try {
            load();
            std::cout << kind << " " << path << ": ok\n";
        } catch (const Error& e) {
            std::cout << kind << " " << path << ": FAIL: " << e.what() << "\n";
            ++failures;
        }
    };
    for (const std::string& path : args.luts) {
        check("lut", path, [&] { load_lut(path); });
    }
    for (const std::string& path : args.configs) {
        check("config", path, [&] { load_sim_config(path).validate(); });
    }
    for (const std::string& path : args.ensembles) {
        check("ensemble", path, [&] { load_ensemble(path); });
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nrl2sm: EESM link-to-system mapping toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nrl2sm 0.1.0");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run the link simulator");
    sim->add_option("--config", sim_args.config_path,
                    "Config file (JSON); defaults applied when omitted");
    sim->add_option("--set", sim_args.sets,
                    "Dotted config override, e.g. channel.mean_snr_db=12.5")
        ->take_all();
    sim->add_option("--sweep", sim_args.sweeps,
                    "Sweep axis KEY=V1,V2,... (repeatable, cartesian)")
        ->take_all();
    sim->add_option("--output,-o", sim_args.output,
                    "Results path ('-' for stdout)");
    sim->add_option("--format", sim_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--trace", sim_args.trace_path,
                    "Per-packet trace CSV (single config only)");
    sim->add_flag("--print-config", sim_args.print_config,
                  "Print the effective config and exit");

    CalibrateArgs cal_args;
    CLI::App* cal = app.add_subcommand("calibrate", "Fit the EESM beta");
    cal->add_option("--ensemble", cal_args.ensemble_path,
                    "Ensemble file (JSON)");
    cal->add_flag("--synth", cal_args.synth,
                  "Generate a synthetic fading ensemble instead");
    cal->add_option("--table", cal_args.table, "MCS table (1 or 2)");
    cal->add_option("--mcs", cal_args.mcs_index, "MCS index");
    cal->add_option("--channels", cal_args.channels,
                    "Synthetic: number of channel draws");
    cal->add_option("--noise-grid", cal_args.noise_grid,
                    "Synthetic: comma-separated noise levels (dB)");
    cal->add_option("--n-rbs", cal_args.n_rbs, "Synthetic: RBs per spectrum");
    cal->add_option("--coherence-rbs", cal_args.coherence_rbs,
                    "Synthetic: RBs per fading block");
    cal->add_option("--seed", cal_args.seed, "Synthetic: RNG seed");
    double planted = 0.0;
    CLI::Option* planted_opt =
        cal->add_option("--planted-beta", planted,
                        "Synthetic: beta used to produce measured BLERs");
    cal->add_option("--export-ensemble", cal_args.export_ensemble,
                    "Write the ensemble to this path");
    cal->add_option("--lut", cal_args.lut_path,
                    "Use this LUT as the AWGN reference");
    cal->add_option("--ref-cbs", cal_args.ref_cbs,
                    "Code block size of the reference curve");
    cal->add_option("--beta-min", cal_args.search.beta_min, "Search lower edge");
    cal->add_option("--beta-max", cal_args.search.beta_max, "Search upper edge");
    cal->add_option("--tolerance", cal_args.search.tolerance,
                    "Final bracket width");
    cal->add_option("--grid-points", cal_args.search.grid_points,
                    "Coarse scan size");
    cal->add_option("--output,-o", cal_args.output,
                    "Result path ('-' for stdout)");

    GenlutArgs gen_args;
    CLI::App* gen = app.add_subcommand("genlut", "Generate a synthetic LUT");
    gen->add_option("--output,-o", gen_args.output, "LUT path");
    gen->add_option("--seed", gen_args.seed, "Provenance seed");
    gen->add_option("--cbs-grid", gen_args.cbs_grid,
                    "Comma-separated CBS values");
    gen->add_option("--sinr-min", gen_args.sinr_min, "Grid start (dB)");
    gen->add_option("--sinr-max", gen_args.sinr_max, "Grid end (dB)");
    gen->add_option("--sinr-step", gen_args.sinr_step, "Grid step (dB)");

    ValidateArgs val_args;
    CLI::App* val = app.add_subcommand("validate", "Lint data files");
    val->add_option("--lut", val_args.luts, "LUT file")->take_all();
    val->add_option("--config", val_args.configs, "Sim config file")
        ->take_all();
    val->add_option("--ensemble", val_args.ensembles, "Ensemble file")
        ->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (planted_opt->count() > 0) cal_args.planted_beta = planted;
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (cal->parsed()) return cmd_calibrate(cal_args);
        if (gen->parsed()) return cmd_genlut(gen_args);
        if (val->parsed()) return cmd_validate(val_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
