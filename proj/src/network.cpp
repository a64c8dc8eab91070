#include "neusoc/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "neusoc/csv.hpp"
#include "neusoc/errors.hpp"
#include "neusoc/rng.hpp"

namespace neusoc {

std::string_view to_string(SynapseMode m) {
    return m == SynapseMode::Analog ? "analog" : "bistable";
}

std::optional<SynapseMode> parse_synapse_mode(std::string_view s) {
    if (s == "analog" || s == "ANALOG") return SynapseMode::Analog;
    if (s == "bistable" || s == "BISTABLE") return SynapseMode::Bistable;
    return std::nullopt;
}

SynapseParams default_network_synapse() {
    SynapseParams p;
    p.gamma = 0.004;
    p.a_minus = 0.35;
    p.tau_p = 0.1e-6;
    p.tau_m = 0.1e-6;
    return p;
}

void NetworkConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("network: ") + what);
    };
    need(n_in == kPixels, "n_in must be 64 (one input per optdigits pixel)");
    need(n_out > 0 && n_out <= kClasses, "n_out must be in 1..10");
    need(w_min > 0 && w_min < w_max && w_max <= 1.0, "need 0 < w_min < w_max <= 1");
    need(sample_duration > 0, "sample_duration must be positive");
    need(sample_gap >= 5.0 * std::max(synapse.tau_p, synapse.tau_m), "sample_gap must be at least 5 trace time constants");
    need(max_input_rate >= 0, "max_input_rate must be non-negative");
    need(neuron.threshold > 0, "neuron threshold must be positive");
    need(neuron.leak_tau > 0, "neuron leak_tau must be positive");
    need(neuron.refractory >= 0, "neuron refractory must be non-negative");
    need(teacher_strength >= 0, "teacher_strength must be non-negative");
    need(v_g_init >= 0 && v_g_init <= synapse.v_dd, "v_g_init must lie within the rails");
    need(epochs >= 0, "epochs must be non-negative");
    need(settle_tau_w >= 0, "settle_tau_w must be non-negative");
    synapse.validate();
}

std::size_t NetworkConfig::sample_limit() const {
    if (max_samples > 0) return max_samples;
    return mode == SynapseMode::Bistable ? 500 : std::numeric_limits<std::size_t>::max();
}

SpikeTrains encode_image(std::span<const std::uint8_t> pixels, const NetworkConfig& cfg, std::uint64_t stream) {
    if (pixels.size() != static_cast<std::size_t>(cfg.n_in))
        throw std::invalid_argument("encode_image: pixel count does not match n_in");
    SpikeTrains trains(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (pixels[i] > kMaxPixel) throw std::invalid_argument("encode_image: pixel out of range 0..16");
        const double rate = pixels[i] / static_cast<double>(kMaxPixel) * cfg.max_input_rate;
        if (rate <= 0) continue;
        Rng rng(stream_seed(stream, {i}));
        double t = rng.exponential(rate);
        while (t < cfg.sample_duration) {
            trains[i].push_back(t);
            t += rng.exponential(rate);
        }
    }
    return trains;
}

int predict_from_counts(std::span<const int> counts) {
    int best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    return best;
}

std::uint64_t eval_stream(std::uint64_t seed, std::size_t index) { return stream_seed(seed, {1, index}); }
std::uint64_t train_stream(std::uint64_t seed, int epoch, std::size_t index) {
    return stream_seed(seed, {2, static_cast<std::uint64_t>(epoch), index});
}
std::uint64_t probe_stream(std::uint64_t seed, int epoch, std::size_t index) {
    return stream_seed(seed, {3, static_cast<std::uint64_t>(epoch), index});
}

Network::Network(NetworkConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    syn_params_ = cfg_.synapse;
    syn_params_.latch_enabled = cfg_.mode == SynapseMode::Bistable;
    SynapseState init;
    init.v_g = cfg_.v_g_init;
    syn_.assign(static_cast<std::size_t>(cfg_.n_in * cfg_.n_out), init);
}

void Network::set_state_voltage(int input, int output, double v_g) {
    auto& s = syn_.at(index(input, output));
    s.v_g = std::clamp(v_g, 0.0, syn_params_.v_dd);
}

double Network::weight_from_voltage(double v_g) const {
    return cfg_.w_min + (cfg_.w_max - cfg_.w_min) * v_g / syn_params_.v_dd;
}

std::vector<double> Network::weights() const {
    std::vector<double> w(syn_.size());
    std::transform(syn_.begin(), syn_.end(), w.begin(), [this](const SynapseState& s) { return weight_from_voltage(s.v_g); });
    return w;
}

double Network::mean_weight() const {
    const auto w = weights();
    return std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
}

namespace {

struct InputEvent {
    double t;
    int input;
};

std::vector<InputEvent> merge_trains(const SpikeTrains& spikes, int n_in, double duration) {
    if (spikes.size() != static_cast<std::size_t>(n_in))
        throw std::invalid_argument("present_sample: expected one spike train per input");
    std::vector<InputEvent> ev;
    for (int i = 0; i < n_in; ++i) {
        const auto& tr = spikes[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < tr.size(); ++j) {
            if (!(tr[j] >= 0.0) || tr[j] >= duration)
                throw std::invalid_argument("present_sample: spike outside the sample window");
            if (j > 0 && tr[j] < tr[j - 1]) throw std::invalid_argument("present_sample: unsorted spike train");
            ev.push_back({tr[j], i});
        }
    }
    std::stable_sort(ev.begin(), ev.end(), [](const InputEvent& a, const InputEvent& b) { return a.t < b.t; });
    return ev;
}

/// Shared event loop. `weight_of(i, k, abs_t)` returns the weight seen by the
/// neurons for input i at absolute time abs_t (and may apply plasticity);
/// `on_fire(k, abs_t)` is called for each output spike.
template <class WeightFn, class FireFn>
PresentationResult run_wta(const std::vector<InputEvent>& events, const NetworkConfig& cfg, double t0,
                           const std::vector<double>& gain, std::optional<int> teacher_label, WeightFn&& weight_of,
                           FireFn&& on_fire) {
    const auto n_out = static_cast<std::size_t>(cfg.n_out);
    PresentationResult r;
    r.counts.assign(n_out, 0);
    std::vector<double> membrane(n_out, 0.0);
    std::vector<double> w(n_out);
    double t_mem = 0.0;
    double refractory_until = -std::numeric_limits<double>::infinity();

    for (const auto& e : events) {
        const double abs_t = t0 + e.t;
        for (std::size_t k = 0; k < n_out; ++k) w[k] = weight_of(e.input, static_cast<int>(k), abs_t);
        if (e.t < refractory_until) continue;

        const double decay = std::exp(-(e.t - t_mem) / cfg.neuron.leak_tau);
        t_mem = e.t;
        int winner = -1;
        for (std::size_t k = 0; k < n_out; ++k) {
            membrane[k] = membrane[k] * decay + gain[k] * w[k];
            if (teacher_label && static_cast<std::size_t>(*teacher_label) == k) membrane[k] += cfg.teacher_strength;
            if (membrane[k] >= cfg.neuron.threshold &&
                (winner < 0 || membrane[k] > membrane[static_cast<std::size_t>(winner)]))
                winner = static_cast<int>(k);
        }
        if (winner < 0) continue;

        ++r.counts[static_cast<std::size_t>(winner)];
        r.fires.push_back({e.t, winner});
        on_fire(winner, abs_t);
        std::fill(membrane.begin(), membrane.end(), 0.0);
        refractory_until = e.t + cfg.neuron.refractory;
    }
    r.predicted = predict_from_counts(r.counts);
    return r;
}

/// Per-neuron input gains for one sample; all ones unless normalize_input.
std::vector<double> input_gains(const std::vector<double>& w, const NetworkConfig& cfg) {
    const auto n_out = static_cast<std::size_t>(cfg.n_out);
    std::vector<double> gain(n_out, 1.0);
    if (!cfg.neuron.normalize_input) return gain;
    std::vector<double> sum(n_out, 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) sum[j % n_out] += w[j];
    const double mean = std::accumulate(sum.begin(), sum.end(), 0.0) / static_cast<double>(n_out);
    for (std::size_t k = 0; k < n_out; ++k) gain[k] = mean / sum[k];
    return gain;
}

}  // namespace

PresentationResult Network::present_sample(const SpikeTrains& spikes, std::optional<int> label, bool train) {
    if (label && (*label < 0 || *label >= cfg_.n_out)) throw std::invalid_argument("present_sample: label out of range");
    const auto events = merge_trains(spikes, cfg_.n_in, cfg_.sample_duration);
    const double t0 = t_now_;
    const auto gain = input_gains(weights(), cfg_);
    PresentationResult r;
    if (train) {
        r = run_wta(
            events, cfg_, t0, gain, label,
            [&](int i, int k, double abs_t) {
                auto& s = syn_[index(i, k)];
                s = evolve(s, abs_t, syn_params_);
                const double w = weight_from_voltage(s.v_g);
                s = on_pre(s, abs_t, syn_params_);
                return w;
            },
            [&](int k, double abs_t) {
                for (int i = 0; i < cfg_.n_in; ++i) {
                    auto& s = syn_[index(i, k)];
                    s = on_post(s, abs_t, syn_params_);
                }
            });
    } else {
        r = run_wta(
            events, cfg_, t0, gain, std::nullopt,
            [&](int i, int k, double) { return weight_from_voltage(syn_[index(i, k)].v_g); },
            [](int, double) {});
    }
    t_now_ = t0 + cfg_.sample_duration + cfg_.sample_gap;
    ++presented_;
    return r;
}

PresentationResult Network::classify(const Image& pixels, std::uint64_t stream) const {
    const auto spikes = encode_image(pixels, cfg_, stream);
    const auto events = merge_trains(spikes, cfg_.n_in, cfg_.sample_duration);
    const auto w = weights();
    return run_wta(
        events, cfg_, 0.0, input_gains(w, cfg_), std::nullopt,
        [&](int i, int k, double) { return w[index(i, k)]; }, [](int, double) {});
}

TrainReport Network::train(const Dataset& ds) {
    TrainReport rep;
    const std::size_t limit = cfg_.sample_limit();
    const std::size_t stride = std::max<std::size_t>(1, cfg_.history_stride);
    std::size_t correct = 0;
    auto snapshot = [&] {
        HistoryEntry h;
        h.sample_idx = rep.samples_presented;
        h.accuracy_running = rep.samples_presented ? static_cast<double>(correct) / static_cast<double>(rep.samples_presented) : 0.0;
        h.weights = weights();
        h.mean_w = std::accumulate(h.weights.begin(), h.weights.end(), 0.0) / static_cast<double>(h.weights.size());
        rep.history.push_back(std::move(h));
    };

    for (int epoch = 0; epoch < cfg_.epochs && rep.samples_presented < limit; ++epoch) {
        for (std::size_t n = 0; n < ds.size() && rep.samples_presented < limit; ++n) {
            const auto& sample = ds.samples[n];
            if (sample.label >= cfg_.n_out) continue;
            if (classify(sample.pixels, probe_stream(cfg_.seed, epoch, n)).predicted == sample.label) ++correct;
            present_sample(encode_image(sample.pixels, cfg_, train_stream(cfg_.seed, epoch, n)), sample.label, true);
            ++rep.samples_presented;
            if (rep.samples_presented % stride == 0) snapshot();
        }
    }
    if (rep.samples_presented == 0) return rep;
    if (rep.history.empty() || rep.history.back().sample_idx != rep.samples_presented) snapshot();

    if (cfg_.mode == SynapseMode::Bistable) {
        settle(cfg_.settle_tau_w * syn_params_.tau_w);
        rep.undecided_after_settle = count_undecided();
        quantize();
    }
    return rep;
}

void Network::settle(double duration) {
    if (duration < 0) throw std::invalid_argument("settle: negative duration");
    t_now_ += duration;
    for (auto& s : syn_) s = evolve(s, t_now_, syn_params_);
}

std::size_t Network::count_undecided() const {
    return static_cast<std::size_t>(std::count_if(syn_.begin(), syn_.end(), [this](const SynapseState& s) {
        return long_term_state(s, syn_params_) == LongTermState::Undecided;
    }));
}

void Network::quantize() {
    for (auto& s : syn_) {
        switch (long_term_state(s, syn_params_)) {
            case LongTermState::LRS: s.v_g = syn_params_.v_dd; break;
            case LongTermState::HRS: s.v_g = 0.0; break;
            case LongTermState::Undecided: s.v_g = s.v_g >= syn_params_.v_w_thr ? syn_params_.v_dd : 0.0; break;
        }
    }
}

std::vector<std::array<double, kPixels>> Network::weight_maps() const {
    std::vector<std::array<double, kPixels>> maps(static_cast<std::size_t>(cfg_.n_out));
    for (int k = 0; k < cfg_.n_out; ++k)
        for (int i = 0; i < cfg_.n_in; ++i) maps[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = weight(i, k);
    return maps;
}

void save_model(const std::string& path, const Network& net, const std::string& config_text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "neusoc-model " << kModelVersion << '\n';
    out << "[config]\n" << config_text;
    if (!config_text.empty() && config_text.back() != '\n') out << '\n';
    out << "[state_voltages] " << net.config().n_in << ' ' << net.config().n_out << '\n';
    for (int i = 0; i < net.config().n_in; ++i) {
        for (int k = 0; k < net.config().n_out; ++k) out << (k ? " " : "") << format_double(net.synapse(i, k).v_g);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file " + path);
    std::string line;
    std::getline(in, line);
    std::istringstream hdr(line);
    std::string magic;
    int version = -1;
    hdr >> magic >> version;
    if (magic != "neusoc-model") throw ConfigError(path + ": not a model file");
    if (version != kModelVersion)
        throw ConfigError(path + ": model version " + std::to_string(version) + " does not match supported version " +
                          std::to_string(kModelVersion));
    std::getline(in, line);
    if (line != "[config]") throw ConfigError(path + ": missing [config] section");

    LoadedModel m;
    int n_in = 0, n_out = 0;
    while (std::getline(in, line)) {
        if (line.rfind("[state_voltages]", 0) == 0) {
            std::istringstream dims(line.substr(16));
            dims >> n_in >> n_out;
            break;
        }
        m.config_text += line + '\n';
    }
    if (n_in <= 0 || n_out <= 0) throw ConfigError(path + ": missing [state_voltages] section");
    m.v_g.reserve(static_cast<std::size_t>(n_in * n_out));
    double v = 0;
    while (in >> v) m.v_g.push_back(v);
    if (m.v_g.size() != static_cast<std::size_t>(n_in * n_out))
        throw ConfigError(path + ": expected " + std::to_string(n_in * n_out) + " state voltages, found " +
                          std::to_string(m.v_g.size()));
    return m;
}

void write_history_csv(const std::string& path, std::span<const HistoryEntry> history) {
    CsvWriter out(path, {"sample_idx", "accuracy_running", "mean_w"});
    for (const auto& h : history) out.row(h.sample_idx, h.accuracy_running, h.mean_w);
}

void write_weight_pgm(const std::string& path, const std::array<double, kPixels>& map, double w_min, double w_max) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "P2\n" << kImageSide << ' ' << kImageSide << "\n255\n";
    for (int r = 0; r < kImageSide; ++r) {
        for (int c = 0; c < kImageSide; ++c) {
            const double f = std::clamp((map[static_cast<std::size_t>(r * kImageSide + c)] - w_min) / (w_max - w_min), 0.0, 1.0);
            out << (c ? " " : "") << static_cast<int>(std::lround(f * 255.0));
        }
        out << '\n';
    }
}

void write_weight_maps_csv(const std::string& path, std::span<const std::array<double, kPixels>> maps) {
    CsvWriter out(path, {"neuron", "row", "col", "w"});
    for (std::size_t k = 0; k < maps.size(); ++k)
        for (int i = 0; i < kPixels; ++i) out.row(k, i / kImageSide, i % kImageSide, maps[k][static_cast<std::size_t>(i)]);
}

}  // namespace neusoc
