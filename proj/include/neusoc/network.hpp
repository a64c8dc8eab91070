#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neusoc/dataset.hpp"
#include "neusoc/synapse.hpp"

namespace neusoc {

enum class SynapseMode { Analog, Bistable };

std::string_view to_string(SynapseMode m);
std::optional<SynapseMode> parse_synapse_mode(std::string_view s);

struct NeuronParams {
    double threshold = 6.0;       // accumulated weight units
    double leak_tau = 10e-6;     // s
    double refractory = 0.5e-6;  // s, shared by the whole WTA group
    /// Scales each neuron's input by mean_column_sum / own_column_sum, taken
    /// at the start of every sample, so large templates do not win by size.
    bool normalize_input = false;
};

/// Synapse defaults for the classification network. The single-synapse
/// experiments use a large gamma to make one pairing visible; here the
/// update per event must be small compared to the 0..v_dd state range
/// because every sample produces hundreds of pairings.
SynapseParams default_network_synapse();

struct NetworkConfig {
    int n_in = kPixels;
    int n_out = kClasses;
    SynapseParams synapse = default_network_synapse();
    double sample_duration = 50e-6;  // s
    double sample_gap = 20e-6;       // s of silence between samples
    double max_input_rate = 5e5;     // Hz for a saturated (16) pixel
    NeuronParams neuron{};
    double teacher_strength = 1.0;   // units added to the labeled neuron per input event
    double w_min = 0.01;
    double w_max = 1.0;
    double v_g_init = 0.0;           // initial state of every synapse, V
    SynapseMode mode = SynapseMode::Analog;
    /// 0 means "all samples" (Analog) or 500 (Bistable).
    std::size_t max_samples = 0;
    int epochs = 1;
    /// Latch-only settling after training, in units of tau_w.
    double settle_tau_w = 10.0;
    std::size_t history_stride = 100;
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t sample_limit() const;
};

/// Per-input spike times within one sample window, sorted ascending.
using SpikeTrains = std::vector<std::vector<double>>;

/// Poisson rate coding: input i fires at (pixel_i / 16) * max_input_rate over
/// [0, sample_duration). Throws std::invalid_argument for pixels above 16.
SpikeTrains encode_image(std::span<const std::uint8_t> pixels, const NetworkConfig& cfg, std::uint64_t stream);

struct OutputEvent {
    double t = 0.0;  // relative to the sample start
    int neuron = 0;
};

struct PresentationResult {
    std::vector<int> counts;
    std::vector<OutputEvent> fires;
    int predicted = 0;
};

/// argmax of spike counts, ties to the lowest index.
int predict_from_counts(std::span<const int> counts);

struct HistoryEntry {
    std::size_t sample_idx = 0;
    double accuracy_running = 0.0;
    double mean_w = 0.0;
    std::vector<double> weights;  // row-major [input][output]
};

struct TrainReport {
    std::vector<HistoryEntry> history;
    std::size_t samples_presented = 0;
    /// Undecided synapses after settling, before snapping (Bistable only).
    std::size_t undecided_after_settle = 0;
};

struct EvalResult {
    double accuracy = 0.0;
    std::array<std::array<int, kClasses>, kClasses> confusion{};  // [true][predicted]
    std::size_t total = 0;
    std::size_t correct = 0;
};

/// Fully connected n_in x n_out layer of STDP synapses feeding a hard
/// winner-take-all group of leaky integrate-and-fire neurons.
class Network {
public:
    explicit Network(NetworkConfig cfg);

    const NetworkConfig& config() const { return cfg_; }
    double now() const { return t_now_; }

    const SynapseState& synapse(int input, int output) const { return syn_[index(input, output)]; }
    void set_state_voltage(int input, int output, double v_g);

    double weight_from_voltage(double v_g) const;
    double weight(int input, int output) const { return weight_from_voltage(synapse(input, output).v_g); }
    std::vector<double> weights() const;
    double mean_weight() const;

    /// Runs one sample window starting at now(); advances now() by
    /// sample_duration + sample_gap. STDP and teacher act only when train is
    /// set. Throws std::invalid_argument if a spike train is unsorted or
    /// outside the window.
    PresentationResult present_sample(const SpikeTrains& spikes, std::optional<int> label, bool train);

    /// Presents samples in order with the teacher on, stopping at
    /// sample_limit(). Bistable mode then lets the latches settle for
    /// settle_tau_w time constants and snaps the states to the rails.
    TrainReport train(const Dataset& ds);

    /// Synapses whose long-term state is still undecided.
    std::size_t count_undecided() const;

    /// Latch-only evolution of every synapse for `duration` seconds.
    void settle(double duration);

    /// Snaps every state to its long-term rail (undecided states by side of
    /// the latch threshold). Used for Bistable mode after settling.
    void quantize();

    /// Classification without teacher or plasticity; independent of the
    /// network's clock. `stream` selects the encoding substream.
    PresentationResult classify(const Image& pixels, std::uint64_t stream) const;

    /// 10 row-major 8x8 maps, one per output neuron.
    std::vector<std::array<double, kPixels>> weight_maps() const;

    const SynapseParams& synapse_params() const { return syn_params_; }

private:
    std::size_t index(int input, int output) const {
        return static_cast<std::size_t>(input) * static_cast<std::size_t>(cfg_.n_out) + static_cast<std::size_t>(output);
    }

    NetworkConfig cfg_;
    SynapseParams syn_params_;  // cfg_.synapse with the latch set by the mode
    std::vector<SynapseState> syn_;
    double t_now_ = 0.0;
    std::size_t presented_ = 0;
};

/// Encoding substream for evaluation sample `index` (independent of training streams).
std::uint64_t eval_stream(std::uint64_t seed, std::size_t index);
std::uint64_t train_stream(std::uint64_t seed, int epoch, std::size_t index);
/// Stream for the teacher-off probe that scores each training sample before it is learned.
std::uint64_t probe_stream(std::uint64_t seed, int epoch, std::size_t index);

/// Serial reference evaluation.
EvalResult evaluate_serial(const Network& net, const Dataset& ds);
/// OpenMP evaluation sharded over samples; bit-identical to evaluate_serial.
/// workers <= 0 uses the OpenMP default.
EvalResult evaluate(const Network& net, const Dataset& ds, int workers = 0);

/// Plain-text model file: header line, the full config, then v_g per synapse.
inline constexpr int kModelVersion = 1;
void save_model(const std::string& path, const Network& net, const std::string& config_text);
struct LoadedModel {
    std::string config_text;
    std::vector<double> v_g;  // row-major [input][output]
};
LoadedModel load_model_file(const std::string& path);

void write_history_csv(const std::string& path, std::span<const HistoryEntry> history);
/// P2 PGM, 8x8, linear map of [w_min, w_max] onto 0..255.
void write_weight_pgm(const std::string& path, const std::array<double, kPixels>& map, double w_min, double w_max);
void write_weight_maps_csv(const std::string& path, std::span<const std::array<double, kPixels>> maps);

}  // namespace neusoc
