#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "neusoc/config.hpp"
#include "neusoc/csv.hpp"
#include "neusoc/dataset.hpp"
#include "neusoc/energy.hpp"
#include "neusoc/errors.hpp"
#include "neusoc/experiments.hpp"
#include "neusoc/memristor.hpp"
#include "neusoc/network.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace neusoc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Config file of key = value lines");
    cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed (overrides network.seed)");
    cmd->add_option("--set", o.overrides, "Override one config key, key=value (repeatable)");
}

/// Defaults, then the config file, then NEUSOC_* environment variables, then
/// --set and --seed.
RunConfig resolve_config(const CommonOptions& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    apply_env_overrides(cfg, [](const char* name) { return std::getenv(name); });
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) cfg.network.seed = *o.seed;
    cfg.finalize();
    return cfg;
}

fs::path out_dir(const CommonOptions& o) {
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + o.out_dir + ": " + ec.message());
    return fs::path(o.out_dir);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

json trace_summary(const BistabilityCase& c) {
    return {{"pairs_applied", c.pairs_applied},
            {"v_g_after_pairs", c.v_g_after_pairs},
            {"v_g_final", c.v_g_final},
            {"final_state", std::string(to_string(c.final_state))}};
}

int cmd_hysteresis(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto r = run_hysteresis(cfg.memristor, cfg.hysteresis);
    write_iv_csv((dir / "iv_trace.csv").string(), r.trace);
    write_json(dir / "hysteresis_metrics.json", {{"origin_residual_A", r.metrics.origin_residual},
                                                 {"loop_area_VA", r.metrics.loop_area},
                                                 {"final_v_g", r.trace.final_v_g},
                                                 {"final_v_g_half_dt", r.final_v_g_half_dt},
                                                 {"dt_halving_change", r.dt_halving_change},
                                                 {"degenerate", r.degenerate},
                                                 {"passed", r.passed}});
    std::printf("origin residual  %.3e A (limit %.1e)\n", r.metrics.origin_residual, cfg.hysteresis.origin_tolerance);
    std::printf("loop area        %.6e V*A%s\n", r.metrics.loop_area, r.degenerate ? "  (degenerate loop)" : "");
    std::printf("dt/2 change      %.3e\n", r.dt_halving_change);
    std::printf("%s\n", verdict(r.passed));
    return r.passed ? kExitOk : kExitFailed;
}

int cmd_stdp_curve(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto r = run_stdp_curve(cfg.synapse, cfg.stdp_curve);
    write_stdp_curve_csv((dir / "stdp_curve.csv").string(), r.points);
    write_json(dir / "stdp_fit.json", {{"tau_p_fit", r.potentiation.tau},
                                       {"tau_m_fit", r.depression.tau},
                                       {"gamma_a_plus_fit", r.potentiation.amplitude},
                                       {"gamma_a_minus_fit", r.depression.amplitude},
                                       {"tau_p", cfg.synapse.tau_p},
                                       {"tau_m", cfg.synapse.tau_m},
                                       {"max_relative_error", r.max_relative_error},
                                       {"signs_ok", r.signs_ok},
                                       {"monotone_ok", r.monotone_ok},
                                       {"fit_ok", r.fit_ok},
                                       {"passed", r.passed}});
    std::printf("tau_p fit %.4e s (configured %.4e)\n", r.potentiation.tau, cfg.synapse.tau_p);
    std::printf("tau_m fit %.4e s (configured %.4e)\n", r.depression.tau, cfg.synapse.tau_m);
    std::printf("gamma*A+ %.4e V, gamma*A- %.4e V\n", r.potentiation.amplitude, r.depression.amplitude);
    std::printf("max relative error vs closed form %.3e\n", r.max_relative_error);
    std::printf("%s\n", verdict(r.passed));
    return r.passed ? kExitOk : kExitFailed;
}

int cmd_bistability(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto r = run_bistability(cfg.synapse, cfg.bistability);
    write_transient_csv((dir / "bistability_ltp.csv").string(), r.potentiation.trace);
    write_transient_csv((dir / "bistability_ltd.csv").string(), r.depression.trace);
    write_transient_csv((dir / "bistability_threshold.csv").string(), r.threshold.trace);
    write_json(dir / "bistability.json", {{"potentiation", trace_summary(r.potentiation)},
                                          {"depression", trace_summary(r.depression)},
                                          {"threshold", trace_summary(r.threshold)},
                                          {"passed", r.passed}});
    auto line = [](const char* name, const BistabilityCase& c) {
        std::printf("%-12s pairs %3d  v_g after pairs %.4f V  final %.6f V  %s\n", name, c.pairs_applied,
                    c.v_g_after_pairs, c.v_g_final, std::string(to_string(c.final_state)).c_str());
    };
    line("potentiation", r.potentiation);
    line("depression", r.depression);
    line("threshold", r.threshold);
    std::printf("%s\n", verdict(r.passed));
    return r.passed ? kExitOk : kExitFailed;
}

int cmd_pairing_decay(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto r = run_pairing_decay(cfg.synapse, cfg.pairing_decay);
    write_transient_csv((dir / "pairing_decay.csv").string(), r.trace);
    {
        CsvWriter out((dir / "pairing_decay_intervals.csv").string(), {"interval", "v_g_latch_V", "v_g_no_latch_V"});
        for (std::size_t k = 0; k < r.interval_end.size(); ++k)
            out.row(k + 1, r.interval_end[k], r.interval_end_no_latch[k]);
    }
    write_json(dir / "pairing_decay.json", {{"max_interval_deviation", r.max_interval_deviation},
                                            {"v_g_monotone", r.v_g_monotone},
                                            {"current_monotone", r.current_monotone},
                                            {"passed", r.passed}});
    std::printf("pairings %d, final v_g %.4f V\n", cfg.pairing_decay.pairs,
                r.interval_end.empty() ? cfg.pairing_decay.v_g0 : r.interval_end.back());
    std::printf("max per-interval latch deviation %.3f%% of v_dd (limit %.1f%%)\n", 100 * r.max_interval_deviation,
                100 * cfg.pairing_decay.max_interval_deviation);
    std::printf("v_g monotone %s, |I_syn| monotone %s\n", r.v_g_monotone ? "yes" : "no", r.current_monotone ? "yes" : "no");
    std::printf("%s\n", verdict(r.passed));
    return r.passed ? kExitOk : kExitFailed;
}

int cmd_energy_table(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto rows = render_table(cfg.energy, cfg.energy_columns);
    write_energy_table_csv((dir / "energy_table.csv").string(), rows);
    std::cout << format_energy_table(rows, cfg.energy);
    return kExitOk;
}

int cmd_sweep(const CommonOptions& o) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto pts = sweep(cfg.energy, cfg.sweep.axis, cfg.sweep.range);
    write_sweep_csv((dir / "sweep.csv").string(), cfg.sweep.axis, pts);
    std::printf("%-12s %-14s %-14s %s\n", std::string(to_string(cfg.sweep.axis)).c_str(), "E_SNN [J]", "img/s/W", "x GPU");
    for (const auto& p : pts) std::printf("%-12.4g %-14.4e %-14.4g %.4g\n", p.value, p.e_snn, p.throughput, p.acceleration);
    return kExitOk;
}

std::set<int> parse_digits(const std::string& text) {
    std::set<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            const int d = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.insert(d);
        } catch (const std::exception&) {
            throw ConfigError("data.digits: invalid digit '" + tok + "'");
        }
    }
    return out;
}

Dataset load_split(const RunConfig& cfg, Split split) {
    auto ds = load_optdigits(split == Split::Train ? cfg.data.train_path : cfg.data.test_path, split);
    const auto digits = parse_digits(cfg.data.digits);
    return digits.empty() ? ds : subset_digits(ds, digits);
}

std::string default_model(const CommonOptions& o) { return (fs::path(o.out_dir) / "model.txt").string(); }

/// Rebuilds a network from a model file. The stored config is the base; the
/// command line may still override evaluation-only settings.
Network load_network(const std::string& path, const CommonOptions& o, RunConfig& cfg) {
    const auto model = load_model_file(path);
    cfg = RunConfig{};
    apply_config_text(cfg, model.config_text, path);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) cfg.network.seed = *o.seed;
    cfg.finalize();
    Network net(cfg.network);
    const auto n_in = cfg.network.n_in;
    const auto n_out = cfg.network.n_out;
    if (model.v_g.size() != static_cast<std::size_t>(n_in * n_out))
        throw ConfigError(path + ": state count does not match the network size");
    for (int i = 0; i < n_in; ++i)
        for (int k = 0; k < n_out; ++k) net.set_state_voltage(i, k, model.v_g[static_cast<std::size_t>(i * n_out + k)]);
    return net;
}

int cmd_train(const CommonOptions& o, const std::string& model_path) {
    const auto cfg = resolve_config(o);
    const auto dir = out_dir(o);
    const auto train_set = load_split(cfg, Split::Train);
    Network net(cfg.network);
    const auto rep = net.train(train_set);
    const auto path = model_path.empty() ? default_model(o) : model_path;
    save_model(path, net, config_to_text(cfg));
    write_history_csv((dir / "history.csv").string(), rep.history);
    std::printf("mode %s, trained on %zu samples, running accuracy %.4f, mean weight %.4f\n",
                std::string(to_string(cfg.network.mode)).c_str(), rep.samples_presented,
                rep.history.empty() ? 0.0 : rep.history.back().accuracy_running, net.mean_weight());
    if (cfg.network.mode == SynapseMode::Bistable)
        std::printf("undecided synapses after %.0f tau_w of settling: %zu\n", cfg.network.settle_tau_w,
                    rep.undecided_after_settle);
    std::printf("model written to %s\n", path.c_str());
    return kExitOk;
}

int cmd_eval(const CommonOptions& o, const std::string& model_path, int workers) {
    RunConfig cfg;
    const auto path = model_path.empty() ? default_model(o) : model_path;
    const auto net = load_network(path, o, cfg);
    const auto dir = out_dir(o);
    const auto test_set = load_split(cfg, Split::Test);
    const auto r = evaluate(net, test_set, workers > 0 ? workers : cfg.data.eval_workers);
    {
        CsvWriter out((dir / "confusion.csv").string(),
                      {"true_label", "p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9"});
        for (int t = 0; t < kClasses; ++t) {
            const auto& c = r.confusion[static_cast<std::size_t>(t)];
            out.row(t, c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], c[8], c[9]);
        }
    }
    write_json(dir / "eval.json", {{"accuracy", r.accuracy},
                                   {"correct", r.correct},
                                   {"total", r.total},
                                   {"mode", std::string(to_string(cfg.network.mode))},
                                   {"digits", cfg.data.digits}});
    std::printf("accuracy %.4f (%zu / %zu)\n", r.accuracy, r.correct, r.total);
    std::printf("confusion [true x predicted]\n     ");
    for (int p = 0; p < kClasses; ++p) std::printf("%5d", p);
    std::printf("\n");
    for (int t = 0; t < kClasses; ++t) {
        std::printf("%5d", t);
        for (int p = 0; p < kClasses; ++p) std::printf("%5d", r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
        std::printf("\n");
    }
    return kExitOk;
}

int cmd_weights_bitmap(const CommonOptions& o, const std::string& model_path) {
    RunConfig cfg;
    const auto path = model_path.empty() ? default_model(o) : model_path;
    const auto net = load_network(path, o, cfg);
    const auto dir = out_dir(o);
    const auto maps = net.weight_maps();
    for (std::size_t k = 0; k < maps.size(); ++k)
        write_weight_pgm((dir / ("weights_" + std::to_string(k) + ".pgm")).string(), maps[k], cfg.network.w_min,
                         cfg.network.w_max);
    write_weight_maps_csv((dir / "weights.csv").string(), maps);
    std::set<double> distinct;
    for (const auto& m : maps) distinct.insert(m.begin(), m.end());
    std::printf("wrote %zu weight maps to %s (%zu distinct weight values)\n", maps.size(), dir.string().c_str(),
                distinct.size());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Memristive STDP synapse and spiking network experiments"};
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    bool list_keys = false;
    app.add_flag("--list-keys", list_keys, "Print every config key with its default and exit");

    CommonOptions o;
    std::string model_path;
    int workers = 0;

    auto* hysteresis = app.add_subcommand("hysteresis", "Sine-driven I-V sweep of the memristor emulator");
    auto* stdp = app.add_subcommand("stdp-curve", "Delta v_g versus t_post - t_pre from single pairings");
    auto* bist = app.add_subcommand("bistability", "Latch-driven long-term potentiation and depression");
    auto* decay = app.add_subcommand("pairing-decay", "Repeated negative-dt pairings on one synapse");
    auto* table = app.add_subcommand("energy-table", "Per-event energy table (writes energy_table.csv)");
    auto* sweep_cmd = app.add_subcommand("sweep", "Energy model sweep over one parameter");
    auto* train = app.add_subcommand("train", "Train the digit network and save a model file");
    auto* eval = app.add_subcommand("eval", "Score a model file on the test split");
    auto* bitmap = app.add_subcommand("weights-bitmap", "Export the 10 weight maps of a model as PGM and CSV");
    for (auto* c : {hysteresis, stdp, bist, decay, table, sweep_cmd, train, eval, bitmap}) add_common(c, o);
    for (auto* c : {train, eval, bitmap}) c->add_option("--model", model_path, "Model file (default <out>/model.txt)");
    eval->add_option("--workers", workers, "Evaluation threads (0 = config / OpenMP default)");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (list_keys) {
            std::cout << config_to_text(RunConfig{}, true);
            return kExitOk;
        }
        if (hysteresis->parsed()) return cmd_hysteresis(o);
        if (stdp->parsed()) return cmd_stdp_curve(o);
        if (bist->parsed()) return cmd_bistability(o);
        if (decay->parsed()) return cmd_pairing_decay(o);
        if (table->parsed()) return cmd_energy_table(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (train->parsed()) return cmd_train(o, model_path);
        if (eval->parsed()) return cmd_eval(o, model_path, workers);
        if (bitmap->parsed()) return cmd_weights_bitmap(o, model_path);
        std::cerr << app.help();
        return kExitError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
