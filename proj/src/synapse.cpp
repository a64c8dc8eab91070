#include "neusoc/synapse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace neusoc {

void SynapseParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("synapse: ") + what);
    };
    need(tau_p > 0 && tau_m > 0 && tau_w > 0, "time constants must be positive");
    need(v_dd > 0, "v_dd must be positive");
    need(v_w_thr > 0 && v_w_thr < v_dd, "v_w_thr must lie strictly inside (0, v_dd)");
    need(tau_w >= 100.0 * std::max(tau_p, tau_m), "tau_w must be at least 100x the trace time constants");
    need(a_plus >= 0 && a_minus >= 0, "trace amplitudes must be non-negative");
    need(gamma >= 0, "gamma must be non-negative");
    need(t_p_spike > 0, "t_p_spike must be positive");
    need(spike_overhead_j >= 0, "spike_overhead_j must be non-negative");
    mem.validate();
}

std::string_view to_string(LongTermState s) {
    switch (s) {
        case LongTermState::LRS: return "LRS";
        case LongTermState::HRS: return "HRS";
        case LongTermState::Undecided: return "UNDECIDED";
    }
    return "UNDECIDED";
}

SynapseState evolve(SynapseState s, double t_now, const SynapseParams& p) {
    if (t_now < s.t_last) throw std::invalid_argument("synapse evolve: time moved backwards");
    const double dt = t_now - s.t_last;
    if (dt == 0.0) return s;

    s.trace_pre *= std::exp(-dt / p.tau_p);
    s.trace_post *= std::exp(-dt / p.tau_m);

    if (p.latch_enabled && s.v_g != p.v_w_thr) {
        // Unstable equilibrium at the threshold; past ~700 time constants the
        // growth factor overflows, and the state has long since hit a rail.
        const double x = dt / p.tau_w;
        if (x > 700.0) {
            s.v_g = s.v_g > p.v_w_thr ? p.v_dd : 0.0;
        } else {
            s.v_g = std::clamp(p.v_w_thr + (s.v_g - p.v_w_thr) * std::exp(x), 0.0, p.v_dd);
        }
    }
    s.t_last = t_now;
    return s;
}

SynapseState on_pre(SynapseState s, double t, const SynapseParams& p) {
    s = evolve(s, t, p);
    s.v_g = std::clamp(s.v_g - p.gamma * s.trace_post, 0.0, p.v_dd);
    s.trace_pre = p.a_plus;
    return s;
}

SynapseState on_post(SynapseState s, double t, const SynapseParams& p) {
    s = evolve(s, t, p);
    s.v_g = std::clamp(s.v_g + p.gamma * s.trace_pre, 0.0, p.v_dd);
    s.trace_post = p.a_minus;
    return s;
}

double stdp_delta(double dt, const SynapseParams& p) {
    if (dt >= 0.0) return p.gamma * p.a_plus * std::exp(-dt / p.tau_p);
    return -p.gamma * p.a_minus * std::exp(dt / p.tau_m);
}

double synaptic_current(const SynapseState& s, double v_pre_minus_v_post, const SynapseParams& p) {
    return conductance(s.v_g, p.mem) * v_pre_minus_v_post;
}

LongTermState long_term_state(const SynapseState& s, const SynapseParams& p) {
    constexpr double kRailBand = 1e-3;
    if (s.v_g >= p.v_dd - kRailBand) return LongTermState::LRS;
    if (s.v_g <= kRailBand) return LongTermState::HRS;
    return LongTermState::Undecided;
}

double per_spike_energy(const SynapseState& s, double v_across, const SynapseParams& p) {
    return conductance(s.v_g, p.mem) * v_across * v_across * p.t_p_spike + p.spike_overhead_j;
}

}  // namespace neusoc
