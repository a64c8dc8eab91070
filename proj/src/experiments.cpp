#include "neusoc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "neusoc/csv.hpp"

namespace neusoc {

HysteresisResult run_hysteresis(const MemristorParams& mem, const HysteresisSettings& s) {
    HysteresisResult r;
    r.trace = run_iv_sweep(mem, s.drive);
    r.metrics = pinched_metrics(r.trace.samples);

    SineDrive fine = s.drive;
    fine.dt = s.drive.dt / 2.0;
    r.final_v_g_half_dt = run_iv_sweep(mem, fine).final_v_g;
    const double ref = std::abs(r.final_v_g_half_dt);
    r.dt_halving_change = ref > 0 ? std::abs(r.trace.final_v_g - r.final_v_g_half_dt) / ref
                                  : std::abs(r.trace.final_v_g - r.final_v_g_half_dt);

    r.degenerate = !(r.metrics.loop_area > 0);
    r.passed = !r.degenerate && r.metrics.origin_residual < s.origin_tolerance && r.dt_halving_change < 0.01;
    return r;
}

double paired_delta(double dt, const SynapseParams& p, double t_start) {
    SynapseState s;
    s.v_g = p.v_w_thr;
    s.t_last = t_start;
    const double before = s.v_g;
    if (dt >= 0) {
        s = on_pre(s, t_start, p);
        s = on_post(s, t_start + dt, p);
    } else {
        s = on_post(s, t_start, p);
        s = on_pre(s, t_start - dt, p);
    }
    return s.v_g - before;
}

ExponentialFit fit_exponential(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::runtime_error("exponential fit: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0)) throw std::runtime_error("exponential fit: samples must be positive");
        const double ly = std::log(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    const double n = static_cast<double>(x.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::runtime_error("exponential fit: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    if (!(slope < 0)) throw std::runtime_error("exponential fit: curve does not decay");
    const double intercept = (sy - slope * sx) / n;
    return {-1.0 / slope, std::exp(intercept)};
}

StdpCurveResult run_stdp_curve(const SynapseParams& p, const StdpCurveSettings& s) {
    p.validate();
    if (s.points < 2 || !(s.dt_max > s.dt_min)) throw std::invalid_argument("stdp-curve: need points >= 2 and dt_max > dt_min");
    if (!(s.spacing > std::max(std::abs(s.dt_min), std::abs(s.dt_max))))
        throw std::invalid_argument("stdp-curve: pairing spacing must exceed the largest |dt|");

    StdpCurveResult r;
    r.points.reserve(static_cast<std::size_t>(s.points));
    for (int k = 0; k < s.points; ++k) {
        const double dt = s.dt_min + (s.dt_max - s.dt_min) * k / (s.points - 1);
        StdpCurvePoint pt;
        pt.t_first = k * s.spacing;
        pt.dt = dt;
        pt.delta_event = paired_delta(dt, p, pt.t_first);
        pt.delta_closed = stdp_delta(dt, p);
        r.points.push_back(pt);
    }

    r.signs_ok = true;
    std::vector<double> xp, yp, xm, ym;
    for (const auto& pt : r.points) {
        const double err = std::abs(pt.delta_event - pt.delta_closed);
        const double scale = std::abs(pt.delta_closed);
        r.max_relative_error = std::max(r.max_relative_error, scale > 0 ? err / scale : err);
        if (pt.dt >= 0) {
            r.signs_ok = r.signs_ok && pt.delta_event > 0;
            xp.push_back(pt.dt);
            yp.push_back(pt.delta_event);
        } else {
            r.signs_ok = r.signs_ok && pt.delta_event < 0;
            xm.push_back(-pt.dt);
            ym.push_back(-pt.delta_event);
        }
    }

    // |Δ| must shrink strictly with |dt| on each side.
    r.monotone_ok = true;
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        const auto& a = r.points[i - 1];
        const auto& b = r.points[i];
        if (a.dt >= 0 && b.dt >= 0) r.monotone_ok = r.monotone_ok && std::abs(b.delta_event) < std::abs(a.delta_event);
        if (a.dt < 0 && b.dt < 0) r.monotone_ok = r.monotone_ok && std::abs(b.delta_event) > std::abs(a.delta_event);
    }

    try {
        r.potentiation = fit_exponential(xp, yp);
        r.depression = fit_exponential(xm, ym);
        r.fit_ok = std::abs(r.potentiation.tau - p.tau_p) <= s.fit_tolerance * p.tau_p &&
                   std::abs(r.depression.tau - p.tau_m) <= s.fit_tolerance * p.tau_m;
    } catch (const std::runtime_error&) {
        r.fit_ok = false;
    }
    r.passed = r.signs_ok && r.monotone_ok && r.fit_ok && r.max_relative_error <= s.match_tolerance;
    return r;
}

namespace {

TransientSample sample_of(const SynapseState& s, double v_read, const SynapseParams& p) {
    return {s.t_last, s.v_g, synaptic_current(s, v_read, p)};
}

/// Evolves to t_end, recording `n` evenly spaced samples after the current time.
SynapseState record_evolution(SynapseState s, double t_end, int n, double v_read, const SynapseParams& p,
                              std::vector<TransientSample>& out) {
    const double t0 = s.t_last;
    for (int j = 1; j <= n; ++j) {
        s = evolve(s, j == n ? t_end : t0 + (t_end - t0) * j / n, p);
        out.push_back(sample_of(s, v_read, p));
    }
    return s;
}

/// Applies one pairing at the start of an interval and evolves to its end.
/// Interval k spans [k * spacing, (k + 1) * spacing] so neighbours share the
/// exact same boundary value.
SynapseState pairing_interval(SynapseState s, int k, double dt, double spacing, const SynapseParams& p,
                              std::vector<TransientSample>* trace, double v_read, int samples) {
    const double first = k * spacing;
    const double second = first + std::abs(dt);
    const double t_end = (k + 1) * spacing;
    const bool pre_first = dt >= 0;
    s = pre_first ? on_pre(s, first, p) : on_post(s, first, p);
    if (trace) trace->push_back(sample_of(s, v_read, p));
    s = pre_first ? on_post(s, second, p) : on_pre(s, second, p);
    if (trace) {
        trace->push_back(sample_of(s, v_read, p));
        return record_evolution(s, t_end, samples, v_read, p, *trace);
    }
    return evolve(s, t_end, p);
}

}  // namespace

PairingDecayResult run_pairing_decay(const SynapseParams& p, const PairingDecaySettings& s) {
    p.validate();
    if (s.pairs < 0) throw std::invalid_argument("pairing-decay: pairs must be non-negative");
    if (!(s.spacing > std::abs(s.dt))) throw std::invalid_argument("pairing-decay: spacing must exceed |dt|");

    SynapseParams no_latch = p;
    no_latch.latch_enabled = false;

    PairingDecayResult r;
    SynapseState st;
    st.v_g = std::clamp(s.v_g0, 0.0, p.v_dd);
    r.trace.push_back(sample_of(st, s.v_read, p));
    SynapseState free_run = st;

    for (int k = 0; k < s.pairs; ++k) {
        const SynapseState start = st;
        st = pairing_interval(st, k, s.dt, s.spacing, p, &r.trace, s.v_read, s.samples_per_interval);
        const SynapseState one_step = pairing_interval(start, k, s.dt, s.spacing, no_latch, nullptr, 0, 0);
        free_run = pairing_interval(free_run, k, s.dt, s.spacing, no_latch, nullptr, 0, 0);
        r.interval_end.push_back(st.v_g);
        r.interval_end_no_latch.push_back(free_run.v_g);
        r.max_interval_deviation = std::max(r.max_interval_deviation, std::abs(st.v_g - one_step.v_g) / p.v_dd);
    }

    // Strictly decreasing until the lower rail, then pinned there.
    r.v_g_monotone = true;
    r.current_monotone = true;
    double prev_v = std::clamp(s.v_g0, 0.0, p.v_dd);
    double prev_i = synaptic_current(SynapseState{prev_v, 0, 0, 0}, s.v_read, p);
    for (const double v : r.interval_end) {
        const double i = synaptic_current(SynapseState{v, 0, 0, 0}, s.v_read, p);
        r.v_g_monotone = r.v_g_monotone && (prev_v == 0.0 ? v == 0.0 : v < prev_v);
        r.current_monotone = r.current_monotone && std::abs(i) <= std::abs(prev_i);
        prev_v = v;
        prev_i = i;
    }
    r.passed = r.v_g_monotone && r.current_monotone && r.max_interval_deviation < s.max_interval_deviation;
    return r;
}

BistabilityResult run_bistability(const SynapseParams& p, const BistabilitySettings& s) {
    p.validate();
    if (!p.latch_enabled) throw std::invalid_argument("bistability: the latch must be enabled");
    if (!(s.spacing > std::abs(s.dt))) throw std::invalid_argument("bistability: spacing must exceed |dt|");

    auto settle = [&](BistabilityCase& c, SynapseState st) {
        c.v_g_after_pairs = st.v_g;
        st = record_evolution(st, st.t_last + s.settle_tau_w * p.tau_w, s.settle_samples, s.v_read, p, c.trace);
        c.v_g_final = st.v_g;
        c.final_state = long_term_state(st, p);
    };
    auto start = [&](BistabilityCase& c, double v0) {
        SynapseState st;
        st.v_g = std::clamp(v0, 0.0, p.v_dd);
        c.trace.push_back(sample_of(st, s.v_read, p));
        return st;
    };

    BistabilityResult r;
    {
        auto& c = r.potentiation;
        auto st = start(c, s.v_g0);
        while (st.v_g <= p.v_w_thr && c.pairs_applied < s.max_pairs) {
            st = pairing_interval(st, c.pairs_applied, s.dt, s.spacing, p, &c.trace, s.v_read, 10);
            ++c.pairs_applied;
        }
        settle(c, st);
    }
    {
        auto& c = r.depression;
        auto st = start(c, s.v_g0);
        for (; c.pairs_applied < s.pairs_below && st.v_g < p.v_w_thr; ++c.pairs_applied) {
            const auto next = pairing_interval(st, c.pairs_applied, s.dt, s.spacing, p, nullptr, 0, 0);
            if (next.v_g >= p.v_w_thr) break;
            st = pairing_interval(st, c.pairs_applied, s.dt, s.spacing, p, &c.trace, s.v_read, 10);
        }
        settle(c, st);
    }
    {
        auto& c = r.threshold;
        settle(c, start(c, p.v_w_thr));
    }
    r.passed = r.potentiation.final_state == LongTermState::LRS && r.depression.final_state == LongTermState::HRS &&
               r.threshold.final_state == LongTermState::Undecided;
    return r;
}

void write_transient_csv(const std::string& path, const std::vector<TransientSample>& trace) {
    CsvWriter out(path, {"t_s", "v_g_V", "i_syn_A"});
    for (const auto& s : trace) out.row(s.t, s.v_g, s.i_syn);
}

void write_stdp_curve_csv(const std::string& path, const std::vector<StdpCurvePoint>& points) {
    CsvWriter out(path, {"dt_s", "delta_vg_V"});
    for (const auto& p : points) out.row(p.dt, p.delta_event);
}

}  // namespace neusoc
