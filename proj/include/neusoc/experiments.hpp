#pragma once

#include <string>
#include <vector>

#include "neusoc/memristor.hpp"
#include "neusoc/synapse.hpp"

namespace neusoc {

// Single-device experiments behind the CLI subcommands. Each returns its
// data plus a pass/fail verdict so the CLI can map it onto an exit code.

struct HysteresisSettings {
    SineDrive drive{};
    double origin_tolerance = 1e-12;  // A
};

struct HysteresisResult {
    IvTrace trace;
    PinchedMetrics metrics;
    double final_v_g_half_dt = 0.0;
    /// |v_g(dt) - v_g(dt/2)| / |v_g(dt/2)| at the end of the sweep.
    double dt_halving_change = 0.0;
    bool degenerate = false;
    bool passed = false;
};

HysteresisResult run_hysteresis(const MemristorParams& mem, const HysteresisSettings& s);

struct StdpCurveSettings {
    double dt_min = -10e-6;
    double dt_max = 10e-6;
    int points = 41;
    double spacing = 50e-6;  // s between consecutive pairings on the timeline
    double fit_tolerance = 0.05;
    double match_tolerance = 1e-9;
};

struct StdpCurvePoint {
    double t_first = 0.0;  // timeline position of the first spike of the pairing
    double dt = 0.0;
    double delta_event = 0.0;
    double delta_closed = 0.0;
};

struct ExponentialFit {
    double tau = 0.0;
    double amplitude = 0.0;
};

struct StdpCurveResult {
    std::vector<StdpCurvePoint> points;
    ExponentialFit potentiation;  // amplitude = gamma * a_plus
    ExponentialFit depression;    // amplitude = gamma * a_minus
    double max_relative_error = 0.0;
    bool signs_ok = false;
    bool monotone_ok = false;
    bool fit_ok = false;
    bool passed = false;
};

/// Δv_g of a single pre/post pairing at separation dt, simulated with the
/// event-driven operations from the reference state (v_g at the latch
/// threshold, traces empty).
double paired_delta(double dt, const SynapseParams& p, double t_start = 0.0);

/// Least-squares fit of ln(y) = ln(amplitude) - x / tau. Throws
/// std::runtime_error with fewer than two points or non-positive y.
ExponentialFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y);

StdpCurveResult run_stdp_curve(const SynapseParams& p, const StdpCurveSettings& s);

struct TransientSample {
    double t = 0.0;
    double v_g = 0.0;
    double i_syn = 0.0;
};

struct PairingDecaySettings {
    int pairs = 20;
    double dt = -1e-6;
    double spacing = 50e-6;
    double v_g0 = 1.2;
    double v_read = 0.6;               // V across the synapse for I_syn
    int samples_per_interval = 25;
    double max_interval_deviation = 0.025;  // fraction of v_dd
};

struct PairingDecayResult {
    std::vector<TransientSample> trace;           // latch as configured
    std::vector<double> interval_end;             // v_g at the end of each interval
    std::vector<double> interval_end_no_latch;    // same drive, latch disabled
    /// Largest one-interval difference between latch on and off, both started
    /// from the latch-on state, as a fraction of v_dd.
    double max_interval_deviation = 0.0;
    bool v_g_monotone = false;
    bool current_monotone = false;
    bool passed = false;
};

PairingDecayResult run_pairing_decay(const SynapseParams& p, const PairingDecaySettings& s);

struct BistabilitySettings {
    double dt = 1e-6;
    double spacing = 50e-6;
    double v_g0 = 0.3;
    int pairs_below = 2;
    int max_pairs = 200;
    double settle_tau_w = 10.0;
    int settle_samples = 400;
    double v_read = 0.6;
};

struct BistabilityCase {
    std::vector<TransientSample> trace;
    int pairs_applied = 0;
    double v_g_after_pairs = 0.0;
    double v_g_final = 0.0;
    LongTermState final_state = LongTermState::Undecided;
};

struct BistabilityResult {
    BistabilityCase potentiation;  // pushed above threshold, expected LRS
    BistabilityCase depression;    // kept below threshold, expected HRS
    BistabilityCase threshold;     // parked on the threshold, expected UNDECIDED
    bool passed = false;
};

BistabilityResult run_bistability(const SynapseParams& p, const BistabilitySettings& s);

void write_transient_csv(const std::string& path, const std::vector<TransientSample>& trace);
void write_stdp_curve_csv(const std::string& path, const std::vector<StdpCurvePoint>& points);

}  // namespace neusoc
