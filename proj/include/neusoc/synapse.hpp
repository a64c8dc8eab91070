#pragma once

#include <string>
#include <string_view>

#include "neusoc/memristor.hpp"

namespace neusoc {

/// Parameters of the bistable STDP synapse.
///
/// Pre and post pulses launch exponentially decaying traces (amplitudes
/// a_plus / a_minus, time constants tau_p / tau_m). The opposite-side spike
/// samples the trace and moves the state voltage by gamma times the sample.
/// A weak latch regenerates the state away from v_w_thr with time constant
/// tau_w; the state voltage drives the memristor gate, so conductance follows
/// the memristor mapping in `mem`.
struct SynapseParams {
    double a_plus = 0.5;        // V
    double a_minus = 0.5;       // V
    double tau_p = 2e-6;        // s
    double tau_m = 2e-6;        // s
    double gamma = 0.2;         // V/V, = beta * G_m * T_p / C_1
    double tau_w = 2e-3;        // s
    double v_w_thr = 0.6;       // V
    double v_dd = 1.2;          // V
    double t_p_spike = 100e-9;  // s
    bool latch_enabled = true;
    /// Fixed circuit energy per spike event on top of the Ohmic part.
    /// 91.24 fJ (reported LRS total at 600 mV) minus 0.6^2 * 100 ns / 0.4 MOhm.
    double spike_overhead_j = 91.24e-15 - 90e-15;
    MemristorParams mem{};

    void validate() const;
};

struct SynapseState {
    double v_g = 0.0;
    double trace_pre = 0.0;
    double trace_post = 0.0;
    double t_last = 0.0;
};

enum class SpikeKind { Pre, Post };

struct SpikeEvent {
    double t = 0.0;
    SpikeKind kind = SpikeKind::Pre;
};

enum class LongTermState { LRS, HRS, Undecided };

std::string_view to_string(LongTermState s);

/// Advance to t_now: decay both traces and (if enabled) regenerate v_g away
/// from the latch threshold in closed form, clamped to the rails.
/// Throws std::invalid_argument if t_now < state.t_last.
SynapseState evolve(SynapseState s, double t_now, const SynapseParams& p);

/// Pre spike at t: depress by the sampled post trace, then reset the pre trace.
SynapseState on_pre(SynapseState s, double t, const SynapseParams& p);

/// Post spike at t: potentiate by the sampled pre trace, then reset the post trace.
SynapseState on_post(SynapseState s, double t, const SynapseParams& p);

inline SynapseState apply(const SynapseState& s, const SpikeEvent& e, const SynapseParams& p) {
    return e.kind == SpikeKind::Pre ? on_pre(s, e.t, p) : on_post(s, e.t, p);
}

/// Closed-form pairwise learning window, dt = t_post - t_pre. dt == 0 counts as causal.
double stdp_delta(double dt, const SynapseParams& p);

double synaptic_current(const SynapseState& s, double v_pre_minus_v_post, const SynapseParams& p);

LongTermState long_term_state(const SynapseState& s, const SynapseParams& p);

/// Ohmic G * V^2 * T_p plus the fixed overhead.
double per_spike_energy(const SynapseState& s, double v_across, const SynapseParams& p);

}  // namespace neusoc
