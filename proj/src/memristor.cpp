#include "neusoc/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "neusoc/csv.hpp"

namespace neusoc {

void MemristorParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("memristor: ") + what);
    };
    need(beta > 0, "beta must be positive");
    need(v_thn > 0, "v_thn must be positive");
    need(g_m > 0, "g_m must be positive");
    need(c_m > 0, "c_m must be positive");
    need(g_min > 0, "g_min must be positive");
    need(g_max > g_min, "g_min must be below g_max");
    need(v_dd > v_thn, "v_thn must be below v_dd");
}

double conductance(double v_g, const MemristorParams& p) {
    return std::clamp(p.beta * (v_g - p.v_thn), p.g_min, p.g_max);
}

double current(double v_ab, const MemristorState& s, const MemristorParams& p) {
    return conductance(s, p) * v_ab;
}

MemristorState integrate_state(MemristorState s, double v_ab, double dt, const MemristorParams& p) {
    if (!(dt > 0)) throw std::invalid_argument("integrate_state: dt must be positive");
    if (!s.strobe) return s;
    s.v_g = std::clamp(s.v_g + (p.g_m / p.c_m) * v_ab * dt, 0.0, p.v_dd);
    return s;
}

IvTrace run_iv_sweep(const MemristorParams& p, const SineDrive& drive) {
    p.validate();
    if (!(drive.frequency > 0) || !(drive.cycles > 0))
        throw std::invalid_argument("iv sweep: frequency and cycles must be positive");
    if (!(drive.dt > 0) || drive.dt > 1.0 / (1000.0 * drive.frequency))
        throw StepSizeError("iv sweep: dt must satisfy 0 < dt <= 1/(1000*frequency)");
    if (std::abs(drive.amplitude) > p.v_dd)
        throw std::invalid_argument("iv sweep: |amplitude| must not exceed v_dd");

    const double duration = drive.cycles / drive.frequency;
    const auto steps = static_cast<std::size_t>(std::llround(duration / drive.dt));
    const double omega = 2.0 * std::numbers::pi * drive.frequency;

    IvTrace trace;
    trace.samples.reserve(steps + 1);
    MemristorState s{std::clamp(drive.v_g0, 0.0, p.v_dd), true};
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * drive.dt;
        const double v = drive.amplitude * std::sin(omega * t);
        trace.samples.push_back({t, v, current(v, s, p)});
        if (n < steps) s = integrate_state(s, v, drive.dt, p);
    }
    trace.final_v_g = s.v_g;
    return trace;
}

namespace {

double lobe_area(std::span<const IvSample> lobe) {
    // Shoelace over the lobe, closed through the origin.
    double twice = 0.0;
    double px = 0.0, py = 0.0;
    for (const auto& s : lobe) {
        twice += px * s.current - s.v_ab * py;
        px = s.v_ab;
        py = s.current;
    }
    twice += px * 0.0 - 0.0 * py;
    return std::abs(0.5 * twice);
}

int sign_of(double v) { return (v > 0) - (v < 0); }

}  // namespace

PinchedMetrics pinched_metrics(std::span<const IvSample> samples) {
    if (samples.empty()) throw std::invalid_argument("pinched_metrics: empty trace");
    PinchedMetrics m;
    constexpr double kOriginBand = 1e-6;
    for (const auto& s : samples)
        if (std::abs(s.v_ab) < kOriginBand) m.origin_residual = std::max(m.origin_residual, std::abs(s.current));

    std::size_t begin = 0;
    while (begin < samples.size()) {
        const int sg = sign_of(samples[begin].v_ab);
        std::size_t end = begin + 1;
        while (end < samples.size() && sign_of(samples[end].v_ab) == sg) ++end;
        if (sg != 0) m.loop_area += lobe_area(samples.subspan(begin, end - begin));
        begin = end;
    }
    return m;
}

void write_iv_csv(const std::string& path, const IvTrace& trace) {
    CsvWriter out(path, {"t_s", "v_ab_V", "i_A"});
    for (const auto& s : trace.samples) out.row(s.t, s.v_ab, s.current);
}

}  // namespace neusoc
