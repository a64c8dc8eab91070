#include "neusoc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "neusoc/csv.hpp"
#include "neusoc/errors.hpp"

namespace neusoc {

namespace {

struct Field {
    std::string key;
    std::string note;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

[[noreturn]] void bad_value(std::string_view what, std::string_view v) {
    throw ConfigError("invalid " + std::string(what) + " value '" + std::string(v) + "'");
}

double parse_double(std::string_view v) {
    double out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || end != v.data() + v.size()) bad_value("numeric", v);
    return out;
}

template <class Int>
Int parse_int(std::string_view v) {
    Int out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || end != v.data() + v.size()) bad_value("integer", v);
    return out;
}

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value("boolean", v);
}

std::vector<std::string> split_list(std::string_view v) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const auto tok = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!tok.empty()) out.emplace_back(tok);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

using Acc = double& (*)(RunConfig&);

template <class Get>
Field real(std::string key, std::string note, Get acc) {
    return {std::move(key), std::move(note),
            [acc](const RunConfig& c) { return format_double(acc(const_cast<RunConfig&>(c))); },
            [acc](RunConfig& c, std::string_view v) { acc(c) = parse_double(v); }};
}

template <class T, class Get>
Field integer(std::string key, std::string note, Get acc) {
    return {std::move(key), std::move(note),
            [acc](const RunConfig& c) { return std::to_string(acc(const_cast<RunConfig&>(c))); },
            [acc](RunConfig& c, std::string_view v) { acc(c) = parse_int<T>(v); }};
}

template <class Get>
Field boolean(std::string key, std::string note, Get acc) {
    return {std::move(key), std::move(note),
            [acc](const RunConfig& c) { return std::string(acc(const_cast<RunConfig&>(c)) ? "true" : "false"); },
            [acc](RunConfig& c, std::string_view v) { acc(c) = parse_bool(v); }};
}

template <class Get>
Field text(std::string key, std::string note, Get acc) {
    return {std::move(key), std::move(note), [acc](const RunConfig& c) { return acc(const_cast<RunConfig&>(c)); },
            [acc](RunConfig& c, std::string_view v) { acc(c) = std::string(v); }};
}

/// Registers every SynapseParams field below `prefix` (except the memristor map).
template <class Get>
void synapse_fields(std::vector<Field>& f, const std::string& prefix, Get syn, bool network) {
    const std::string src = network ? "chosen for the network" : "chosen";
    f.push_back(real(prefix + "a_plus", "V, potentiation trace amplitude (" + src + ")", [syn](RunConfig& c) -> double& { return syn(c).a_plus; }));
    f.push_back(real(prefix + "a_minus", "V, depression trace amplitude (" + src + ")", [syn](RunConfig& c) -> double& { return syn(c).a_minus; }));
    f.push_back(real(prefix + "tau_p", "s, potentiation trace time constant (" + src + ")", [syn](RunConfig& c) -> double& { return syn(c).tau_p; }));
    f.push_back(real(prefix + "tau_m", "s, depression trace time constant (" + src + ")", [syn](RunConfig& c) -> double& { return syn(c).tau_m; }));
    f.push_back(real(prefix + "gamma", "update gain beta*G_m*T_p/C_1 (" + src + ")", [syn](RunConfig& c) -> double& { return syn(c).gamma; }));
    f.push_back(real(prefix + "tau_w", "s, latch regeneration time constant (nominal ~2 ms)", [syn](RunConfig& c) -> double& { return syn(c).tau_w; }));
    f.push_back(real(prefix + "v_w_thr", "V, latch threshold (nominal ~0.6 V)", [syn](RunConfig& c) -> double& { return syn(c).v_w_thr; }));
    f.push_back(real(prefix + "v_dd", "V, supply (nominal 1.2 V)", [syn](RunConfig& c) -> double& { return syn(c).v_dd; }));
    f.push_back(real(prefix + "t_p_spike", "s, spike pulse width (nominal 100 ns)", [syn](RunConfig& c) -> double& { return syn(c).t_p_spike; }));
    f.push_back(real(prefix + "spike_overhead_j", "J, fixed energy per spike (residual of the 91.24 fJ reference)", [syn](RunConfig& c) -> double& { return syn(c).spike_overhead_j; }));
    if (!network)
        f.push_back(boolean(prefix + "latch_enabled", "weak latch active (network: set by network.mode)", [syn](RunConfig& c) -> bool& { return syn(c).latch_enabled; }));
}

std::vector<Field> build_registry() {
    std::vector<Field> f;
#define R(key, note, expr) f.push_back(real(key, note, [](RunConfig& c) -> double& { return expr; }))
#define I(T, key, note, expr) f.push_back(integer<T>(key, note, [](RunConfig& c) -> T& { return expr; }))
#define B(key, note, expr) f.push_back(boolean(key, note, [](RunConfig& c) -> bool& { return expr; }))
#define S(key, note, expr) f.push_back(text(key, note, [](RunConfig& c) -> std::string& { return expr; }))

    R("memristor.beta", "S/V, triode slope; full rail maps to the LRS (derived from the LRS)", c.memristor.beta);
    R("memristor.v_thn", "V, LVT threshold (chosen)", c.memristor.v_thn);
    R("memristor.g_m", "S, state transconductor, constant (chosen)", c.memristor.g_m);
    R("memristor.c_m", "F, state capacitor (chosen)", c.memristor.c_m);
    R("memristor.g_min", "S, HRS conductance 1/16 MOhm (nominal)", c.memristor.g_min);
    R("memristor.g_max", "S, LRS conductance 1/0.4 MOhm (nominal)", c.memristor.g_max);
    R("memristor.v_dd", "V, supply (nominal 1.2 V)", c.memristor.v_dd);

    R("hysteresis.amplitude", "V, sine drive amplitude", c.hysteresis.drive.amplitude);
    R("hysteresis.frequency", "Hz", c.hysteresis.drive.frequency);
    R("hysteresis.cycles", "number of drive periods", c.hysteresis.drive.cycles);
    R("hysteresis.dt", "s, Euler step, at most 1/(1000*frequency)", c.hysteresis.drive.dt);
    R("hysteresis.v_g0", "V, initial state", c.hysteresis.drive.v_g0);
    R("hysteresis.origin_tolerance", "A, largest allowed current at V = 0", c.hysteresis.origin_tolerance);

    synapse_fields(f, "synapse.", [](RunConfig& c) -> SynapseParams& { return c.synapse; }, false);

    R("stdp_curve.dt_min", "s, most negative t_post - t_pre (nominal sweep -10 us)", c.stdp_curve.dt_min);
    R("stdp_curve.dt_max", "s, most positive t_post - t_pre (nominal sweep +10 us)", c.stdp_curve.dt_max);
    I(int, "stdp_curve.points", "pairings in the sweep", c.stdp_curve.points);
    R("stdp_curve.spacing", "s, between pairings (nominal 50 us)", c.stdp_curve.spacing);
    R("stdp_curve.fit_tolerance", "relative tolerance on fitted tau", c.stdp_curve.fit_tolerance);
    R("stdp_curve.match_tolerance", "relative tolerance event vs closed form", c.stdp_curve.match_tolerance);

    I(int, "pairing_decay.pairs", "number of pairings", c.pairing_decay.pairs);
    R("pairing_decay.dt", "s, t_post - t_pre (nominal -1 us)", c.pairing_decay.dt);
    R("pairing_decay.spacing", "s, between pairings (nominal 50 us)", c.pairing_decay.spacing);
    R("pairing_decay.v_g0", "V, initial state", c.pairing_decay.v_g0);
    R("pairing_decay.v_read", "V, pre-post voltage used for I_syn", c.pairing_decay.v_read);
    I(int, "pairing_decay.samples_per_interval", "trace samples between pairings", c.pairing_decay.samples_per_interval);
    R("pairing_decay.max_interval_deviation", "fraction of v_dd allowed between latch on/off per interval", c.pairing_decay.max_interval_deviation);

    R("bistability.dt", "s, t_post - t_pre of the driving pairings (nominal +1 us)", c.bistability.dt);
    R("bistability.spacing", "s, between pairings", c.bistability.spacing);
    R("bistability.v_g0", "V, initial state of both cases", c.bistability.v_g0);
    I(int, "bistability.pairs_below", "pairings for the case kept below threshold", c.bistability.pairs_below);
    I(int, "bistability.max_pairs", "cap on pairings for the case driven above threshold", c.bistability.max_pairs);
    R("bistability.settle_tau_w", "latch-only settling time in units of tau_w", c.bistability.settle_tau_w);
    I(int, "bistability.settle_samples", "trace samples during settling", c.bistability.settle_samples);
    R("bistability.v_read", "V, pre-post voltage used for I_syn", c.bistability.v_read);

    R("energy.v_p", "V, listed spike amplitude (nominal 300 mV; not used in E_spk)", c.energy.v_p);
    R("energy.v_eff", "V, voltage in E_spk (1.2 V reproduces the reference E_SNN table)", c.energy.v_eff);
    R("energy.t_p", "s, spike width (nominal 100 ns)", c.energy.t_p);
    R("energy.r_lrs", "Ohm, LRS resistance for single-column use", c.energy.r_lrs);
    R("energy.r_hrs", "Ohm, HRS resistance", c.energy.r_hrs);
    R("energy.eta_sp", "neuron sparsity (nominal 0.6)", c.energy.eta_sp);
    R("energy.eta_lrs", "fraction of synapses in LRS (nominal 0.5)", c.energy.eta_lrs);
    R("energy.n_s", "synapse count (nominal 61M)", c.energy.n_s);
    R("energy.n_n", "neuron count (nominal 640k)", c.energy.n_n);
    R("energy.p_n", "W, neuron power when energy.e_n is none", c.energy.p_n);
    f.push_back({"energy.e_n", "J per neuron per event, or none to use p_n*t_p",
                 [](const RunConfig& c) { return c.energy.e_n ? format_double(*c.energy.e_n) : std::string("none"); },
                 [](RunConfig& c, std::string_view v) {
                     if (v == "none") c.energy.e_n.reset();
                     else c.energy.e_n = parse_double(v);
                 }});
    R("energy.devices_per_synapse", "devices per compound synapse (16 reproduces the reference E_SNN table)", c.energy.devices_per_synapse);
    R("energy.gpu_baseline", "images/s/W of the GPU reference (nominal 170)", c.energy.gpu_baseline);
    f.push_back({"energy.table_labels", "column labels",
                 [](const RunConfig& c) {
                     std::string s;
                     for (const auto& col : c.energy_columns) s += (s.empty() ? "" : ",") + col.label;
                     return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                     auto items = split_list(v);
                     c.energy_columns.resize(items.size());
                     for (std::size_t i = 0; i < items.size(); ++i) c.energy_columns[i].label = items[i];
                 }});
    f.push_back({"energy.table_r_lrs", "Ohm per column (nominal 100k,1M,10M)",
                 [](const RunConfig& c) {
                     std::string s;
                     for (const auto& col : c.energy_columns) s += (s.empty() ? "" : ",") + format_double(col.r_lrs);
                     return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                     auto items = split_list(v);
                     c.energy_columns.resize(items.size());
                     for (std::size_t i = 0; i < items.size(); ++i) c.energy_columns[i].r_lrs = parse_double(items[i]);
                 }});
    f.push_back({"energy.table_e_n", "J neuron energy per column, or none (nominal 1.56p,260f,43.3f)",
                 [](const RunConfig& c) {
                     std::string s;
                     for (const auto& col : c.energy_columns)
                         s += (s.empty() ? "" : ",") + (col.e_n ? format_double(*col.e_n) : std::string("none"));
                     return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                     auto items = split_list(v);
                     c.energy_columns.resize(items.size());
                     for (std::size_t i = 0; i < items.size(); ++i) {
                         if (items[i] == "none") c.energy_columns[i].e_n.reset();
                         else c.energy_columns[i].e_n = parse_double(items[i]);
                     }
                 }});

    f.push_back({"sweep.axis", "r_lrs | t_p | v_eff | eta_sp | devices",
                 [](const RunConfig& c) { return std::string(to_string(c.sweep.axis)); },
                 [](RunConfig& c, std::string_view v) {
                     auto a = parse_sweep_axis(v);
                     if (!a) bad_value("sweep.axis", v);
                     c.sweep.axis = *a;
                 }});
    R("sweep.lo", "first axis value", c.sweep.range.lo);
    R("sweep.hi", "last axis value", c.sweep.range.hi);
    I(int, "sweep.points", "number of points", c.sweep.range.points);
    B("sweep.log_spaced", "logarithmic spacing", c.sweep.range.log_spaced);

    R("network.sample_duration", "s, presentation window (nominal 50 us)", c.network.sample_duration);
    R("network.sample_gap", "s, silence between samples (>= 5 trace time constants)", c.network.sample_gap);
    R("network.max_input_rate", "Hz, Poisson rate of a saturated pixel (chosen)", c.network.max_input_rate);
    R("network.threshold", "firing threshold in weight units (chosen)", c.network.neuron.threshold);
    R("network.leak_tau", "s, membrane leak (chosen)", c.network.neuron.leak_tau);
    R("network.refractory", "s, shared WTA refractory window (chosen)", c.network.neuron.refractory);
    B("network.normalize_input", "scale each neuron input by mean / own column weight sum", c.network.neuron.normalize_input);
    R("network.teacher_strength", "weight units added to the labeled neuron per input event (chosen)", c.network.teacher_strength);
    R("network.w_min", "lower weight bound (nominal >= 0.01)", c.network.w_min);
    R("network.w_max", "upper weight bound (nominal 1)", c.network.w_max);
    R("network.v_g_init", "V, initial state voltage of every synapse (chosen)", c.network.v_g_init);
    f.push_back({"network.mode", "analog | bistable",
                 [](const RunConfig& c) { return std::string(to_string(c.network.mode)); },
                 [](RunConfig& c, std::string_view v) {
                     auto m = parse_synapse_mode(v);
                     if (!m) bad_value("network.mode", v);
                     c.network.mode = *m;
                 }});
    I(std::size_t, "network.max_samples", "training samples; 0 = all (analog) or 500 (bistable, nominal)", c.network.max_samples);
    I(int, "network.epochs", "passes over the training split", c.network.epochs);
    R("network.settle_tau_w", "post-training latch settling in units of tau_w", c.network.settle_tau_w);
    I(std::size_t, "network.history_stride", "samples between history snapshots", c.network.history_stride);
    I(std::uint64_t, "network.seed", "RNG seed for input encoding", c.network.seed);
    synapse_fields(f, "network.synapse.", [](RunConfig& c) -> SynapseParams& { return c.network.synapse; }, true);

    S("data.train_path", "optdigits.tra", c.data.train_path);
    S("data.test_path", "optdigits.tes", c.data.test_path);
    S("data.digits", "comma-separated digit subset, empty for all", c.data.digits);
    I(int, "data.eval_workers", "evaluation threads, 0 = OpenMP default", c.data.eval_workers);

#undef R
#undef I
#undef B
#undef S
    return f;
}

const std::vector<Field>& registry() {
    static const std::vector<Field> r = build_registry();
    return r;
}

const Field* find_field(std::string_view key) {
    for (const auto& f : registry())
        if (f.key == key) return &f;
    return nullptr;
}

}  // namespace

void RunConfig::finalize() {
    synapse.mem = memristor;
    network.synapse.mem = memristor;
    try {
        memristor.validate();
        synapse.validate();
        network.validate();
        energy.validate();
        if (energy_columns.empty()) throw std::invalid_argument("energy: table needs at least one column");
        for (const auto& col : energy_columns)
            if (!(col.r_lrs > 0)) throw std::invalid_argument("energy: table resistances must be positive");
        sweep_values(sweep.range);
        if (data.train_path.empty() || data.test_path.empty()) throw std::invalid_argument("data: paths must be set");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    const auto* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + std::string(key) + "'");
    try {
        f->set(cfg, trim(value));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
    const auto* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + std::string(key) + "'");
    return f->get(cfg);
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++lineno;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = std::string(origin) + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        try {
            set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig cfg;
    apply_config_text(cfg, ss.str(), path);
    return cfg;
}

std::string env_name_for(std::string_view key) {
    std::string name = "NEUSOC_";
    for (char ch : key) name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return name;
}

void apply_env_overrides(RunConfig& cfg, const std::function<const char*(const char*)>& getenv_fn) {
    for (const auto& f : registry()) {
        const auto name = env_name_for(f.key);
        if (const char* v = getenv_fn(name.c_str())) {
            try {
                f.set(cfg, trim(v));
            } catch (const ConfigError& e) {
                throw ConfigError(name + ": " + e.what());
            }
        }
    }
}

std::string config_to_text(const RunConfig& cfg, bool with_comments) {
    std::string out;
    std::string section;
    for (const auto& f : registry()) {
        const auto sec = f.key.substr(0, f.key.find('.'));
        if (with_comments && sec != section) {
            if (!section.empty()) out += '\n';
            section = sec;
        }
        out += f.key + " = " + f.get(cfg);
        if (with_comments) out += "  # " + f.note;
        out += '\n';
    }
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> k;
    for (const auto& f : registry()) k.push_back(f.key);
    return k;
}

}  // namespace neusoc
