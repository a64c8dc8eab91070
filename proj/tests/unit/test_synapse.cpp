#include <doctest.h>

#include <cmath>
#include <random>

#include "neusoc/synapse.hpp"

using namespace neusoc;

namespace {

SynapseParams no_latch() {
    SynapseParams p;
    p.latch_enabled = false;
    return p;
}

/// Fine-step RK4 integration of dv/dt = (v - thr) / tau_w with rail clamps.
double latch_ode(double v, double dt, const SynapseParams& p, int steps) {
    const double h = dt / steps;
    auto f = [&](double x) { return (x - p.v_w_thr) / p.tau_w; };
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(v), k2 = f(v + h / 2 * k1), k3 = f(v + h / 2 * k2), k4 = f(v + h * k3);
        v = std::clamp(v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), 0.0, p.v_dd);
    }
    return v;
}

}  // namespace

TEST_SUITE("synapse") {

TEST_CASE("evolve") {
    SynapseParams p;
    SynapseState s{0.7, 0.3, 0.2, 1e-6};
    SUBCASE("zero dt is the identity") {
        const auto r = evolve(s, 1e-6, p);
        CHECK(r.v_g == s.v_g);
        CHECK(r.trace_pre == s.trace_pre);
        CHECK(r.trace_post == s.trace_post);
    }
    SUBCASE("threshold is a fixed point") {
        s.v_g = p.v_w_thr;
        CHECK(evolve(s, 1.0, p).v_g == p.v_w_thr);
    }
    SUBCASE("closed form latch matches a fine-step ODE") {
        s = SynapseState{0.7, 0, 0, 0};
        const double closed = evolve(s, 2e-3, p).v_g;
        CHECK(closed == doctest::Approx(0.6 + 0.1 * std::exp(1.0)).epsilon(1e-12));
        CHECK(closed == doctest::Approx(0.8718).epsilon(1e-4));
        CHECK(std::abs(closed - latch_ode(0.7, 2e-3, p, 20000)) < 1e-6);
    }
    SUBCASE("traces decay exponentially") {
        const auto r = evolve(s, 1e-6 + p.tau_p, p);
        CHECK(r.trace_pre == doctest::Approx(0.3 / std::exp(1.0)).epsilon(1e-12));
        CHECK(r.trace_post == doctest::Approx(0.2 / std::exp(1.0)).epsilon(1e-12));
    }
    SUBCASE("time cannot run backwards") { CHECK_THROWS_AS(evolve(s, 0.5e-6, p), std::invalid_argument); }
    SUBCASE("huge gaps go straight to the rail") {
        s.v_g = 0.6000001;
        CHECK(evolve(s, 10.0, p).v_g == p.v_dd);
        s.v_g = 0.5999999;
        CHECK(evolve(s, 10.0, p).v_g == 0.0);
    }
}

TEST_CASE("spike operations") {
    const auto p = no_latch();
    SUBCASE("pre without a post trace only launches its trace") {
        const auto r = on_pre(SynapseState{0.6, 0, 0, 0}, 1e-6, p);
        CHECK(r.v_g == 0.6);
        CHECK(r.trace_pre == p.a_plus);
    }
    SUBCASE("post without a pre trace only launches its trace") {
        const auto r = on_post(SynapseState{0.6, 0, 0, 0}, 1e-6, p);
        CHECK(r.v_g == 0.6);
        CHECK(r.trace_post == p.a_minus);
    }
    SUBCASE("pre 1 us after post depresses by 60.65 mV") {
        auto s = on_post(SynapseState{0.6, 0, 0, 0}, 0.0, p);
        s = on_pre(s, 1e-6, p);
        CHECK(s.v_g - 0.6 == doctest::Approx(-0.2 * 0.5 * std::exp(-0.5)).epsilon(1e-12));
        CHECK(s.v_g - 0.6 == doctest::Approx(-0.06065).epsilon(1e-3));
        CHECK(s.v_g - 0.6 == doctest::Approx(stdp_delta(-1e-6, p)).epsilon(1e-12));
    }
    SUBCASE("post tau_p after pre potentiates by gamma*a_plus/e") {
        auto s = on_pre(SynapseState{0.6, 0, 0, 0}, 0.0, p);
        s = on_post(s, p.tau_p, p);
        CHECK(s.v_g - 0.6 == doctest::Approx(p.gamma * p.a_plus / std::exp(1.0)).epsilon(1e-12));
    }
    SUBCASE("simultaneous pre then post is the maximum potentiation") {
        auto s = on_pre(SynapseState{0.6, 0, 0, 0}, 0.0, p);
        s = on_post(s, 0.0, p);
        CHECK(s.v_g - 0.6 == doctest::Approx(p.gamma * p.a_plus).epsilon(1e-12));
    }
    SUBCASE("rails clamp") {
        SynapseState s{0.0, 0, p.a_minus, 0};
        CHECK(on_pre(s, 0.0, p).v_g == 0.0);
        s = SynapseState{p.v_dd, p.a_plus, 0, 0};
        CHECK(on_post(s, 0.0, p).v_g == p.v_dd);
    }
    SUBCASE("same-side spikes reset the trace instead of accumulating") {
        auto s = on_pre(SynapseState{0.6, 0, 0, 0}, 0.0, p);
        s = on_pre(s, 0.1e-6, p);
        CHECK(s.trace_pre == p.a_plus);
    }
    SUBCASE("apply dispatches on the spike kind") {
        SynapseState s{0.6, 0, 0, 0};
        CHECK(apply(s, {0.0, SpikeKind::Post}, p).trace_post == p.a_minus);
        CHECK(apply(s, {0.0, SpikeKind::Pre}, p).trace_pre == p.a_plus);
    }
}

TEST_CASE("closed-form window") {
    const auto p = no_latch();
    CHECK(std::abs(stdp_delta(100 * p.tau_p, p)) < 1e-40 * p.gamma * p.a_plus);
    CHECK(stdp_delta(0.0, p) == p.gamma * p.a_plus);
    CHECK(stdp_delta(-1e-6, p) == doctest::Approx(-0.06065).epsilon(1e-3));
}

TEST_CASE("property: signs, window monotonicity and event equivalence") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        SynapseParams p = no_latch();
        p.a_plus = 0.05 + u(gen);
        p.a_minus = 0.05 + u(gen);
        p.tau_p = 1e-7 + 5e-6 * u(gen);
        p.tau_m = 1e-7 + 5e-6 * u(gen);
        p.gamma = 0.01 + 0.3 * u(gen);
        const double d1 = 1e-8 + 5 * p.tau_p * u(gen);
        const double d2 = d1 + 1e-8 + p.tau_p * u(gen);
        CHECK(stdp_delta(d1, p) > 0);
        CHECK(stdp_delta(-d1, p) < 0);
        CHECK(stdp_delta(d1, p) > stdp_delta(d2, p));
        CHECK(std::abs(stdp_delta(-d1, p)) > std::abs(stdp_delta(-d2, p)));

        // Keep |dt| within 5 time constants so the change stays resolvable against v_g.
        const double e1 = 1e-8 + 5 * p.tau_m * u(gen);
        for (double dt : {d1, -e1}) {
            // Additivity: the change does not depend on the starting state while no rail is hit.
            double deltas[2];
            int j = 0;
            for (double v0 : {0.45, 0.75}) {
                SynapseState s{v0, 0, 0, 0};
                if (dt >= 0) {
                    s = on_post(on_pre(s, 0.0, p), dt, p);
                } else {
                    s = on_pre(on_post(s, 0.0, p), -dt, p);
                }
                deltas[j++] = s.v_g - v0;
            }
            const double ref = stdp_delta(dt, p);
            CHECK(std::abs(deltas[0] - ref) <= 1e-9 * std::abs(ref));
            CHECK(std::abs(deltas[1] - deltas[0]) <= 1e-9 * std::abs(ref));
        }
    }
}

TEST_CASE("latch bistability and ordering") {
    SynapseParams p;
    for (double v0 : {0.61, 0.8, 1.1}) {
        SynapseState s{v0, 0, 0, 0};
        double prev = v0;
        for (int k = 1; k <= 100; ++k) {
            s = evolve(s, k * 0.1 * p.tau_w, p);
            CHECK(s.v_g >= prev);
            prev = s.v_g;
        }
        CHECK(long_term_state(s, p) == LongTermState::LRS);
    }
    for (double v0 : {0.59, 0.4, 0.1}) {
        SynapseState s{v0, 0, 0, 0};
        s = evolve(s, 10 * p.tau_w, p);
        CHECK(s.v_g <= 1e-3);
    }
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> v(0.0, 1.2), t(0.0, 5e-3);
    for (int i = 0; i < 1000; ++i) {
        const double a = v(gen), b = v(gen), dt = t(gen);
        const auto hi = evolve(SynapseState{std::max(a, b), 0, 0, 0}, dt, p);
        const auto lo = evolve(SynapseState{std::min(a, b), 0, 0, 0}, dt, p);
        CHECK(hi.v_g >= lo.v_g);
    }
}

TEST_CASE("property: fuzzed event sequences stay in bounds") {
    SynapseParams p;
    p.tau_p = p.tau_m = 1e-6;
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> gap(0.0, 20e-6), u(0.0, 1.0);
    for (int seq = 0; seq < 200; ++seq) {
        SynapseState s{u(gen) * p.v_dd, 0, 0, 0};
        double t = 0;
        for (int e = 0; e < 200; ++e) {
            t += gap(gen);
            s = u(gen) < 0.5 ? on_pre(s, t, p) : on_post(s, t, p);
            REQUIRE(s.v_g >= 0.0);
            REQUIRE(s.v_g <= p.v_dd);
            REQUIRE(s.trace_pre >= 0.0);
            REQUIRE(s.trace_post >= 0.0);
            REQUIRE(s.trace_pre <= std::max(p.a_plus, p.a_minus));
            REQUIRE(s.trace_post <= std::max(p.a_plus, p.a_minus));
        }
    }
}

TEST_CASE("synaptic current and long-term state") {
    SynapseParams p;
    CHECK(synaptic_current(SynapseState{1.2, 0, 0, 0}, 0.0, p) == 0.0);
    CHECK(synaptic_current(SynapseState{1.2, 0, 0, 0}, 0.6, p) == doctest::Approx(1.5e-6).epsilon(1e-12));
    CHECK(synaptic_current(SynapseState{0.0, 0, 0, 0}, 0.6, p) == doctest::Approx(37.5e-9).epsilon(1e-12));
    CHECK(long_term_state(SynapseState{p.v_dd, 0, 0, 0}, p) == LongTermState::LRS);
    CHECK(long_term_state(SynapseState{0.0, 0, 0, 0}, p) == LongTermState::HRS);
    CHECK(long_term_state(SynapseState{p.v_w_thr, 0, 0, 0}, p) == LongTermState::Undecided);
    CHECK(to_string(LongTermState::Undecided) == "UNDECIDED");
}

TEST_CASE("per-spike energy") {
    SynapseParams p;
    const SynapseState lrs{p.v_dd, 0, 0, 0}, hrs{0.0, 0, 0, 0};
    CHECK(per_spike_energy(lrs, 0.6, p) == doctest::Approx(91.24e-15).epsilon(1e-12));
    CHECK(per_spike_energy(lrs, 0.0, p) == p.spike_overhead_j);
    // Ohmic part of the HRS case: 0.6^2 * 100 ns / 16 MOhm.
    const double hrs_ohmic = 0.6 * 0.6 * 100e-9 / 16e6;
    CHECK(hrs_ohmic == doctest::Approx(2.25e-15).epsilon(1e-12));
    CHECK(per_spike_energy(hrs, 0.6, p) == doctest::Approx(p.spike_overhead_j + hrs_ohmic).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    SynapseParams p;
    CHECK_NOTHROW(p.validate());
    p.tau_w = 50 * p.tau_p;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SynapseParams{};
    p.v_w_thr = p.v_dd;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SynapseParams{};
    p.tau_m = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}
