#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace neusoc {

/// Behavioral constants of the CMOS memristor emulator.
///
/// A floating NMOS in triode acts as the variable resistor between A and B;
/// its gate voltage (the state) is integrated on a capacitor by a
/// transconductor while the strobe is high.
struct MemristorParams {
    double beta = 2.5e-6 / 0.9;  // S/V; full rail (1.2 V) maps to the 0.4 MOhm LRS
    double v_thn = 0.3;          // V, LVT threshold
    double g_m = 1e-9;           // S, state transconductor (constant)
    double c_m = 100e-15;        // F
    double g_min = 1.0 / 16e6;   // S, HRS 16 MOhm
    double g_max = 1.0 / 0.4e6;  // S, LRS 0.4 MOhm
    double v_dd = 1.2;           // V

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

struct MemristorState {
    double v_g = 0.0;
    bool strobe = true;
};

struct IvSample {
    double t = 0.0;
    double v_ab = 0.0;
    double current = 0.0;
};

struct IvTrace {
    std::vector<IvSample> samples;
    /// Final state after the last step of the sweep.
    double final_v_g = 0.0;
};

struct SineDrive {
    double amplitude = 0.3;   // V
    double frequency = 5e3;   // Hz
    double cycles = 2.0;
    double dt = 1e-7;         // s
    double v_g0 = 0.6;        // V, initial state
};

struct PinchedMetrics {
    double origin_residual = 0.0;  // A
    double loop_area = 0.0;        // V*A, summed over lobes
};

class StepSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// clamp(beta * (v_g - v_thn), g_min, g_max)
double conductance(double v_g, const MemristorParams& p);
inline double conductance(const MemristorState& s, const MemristorParams& p) {
    return conductance(s.v_g, p);
}

double current(double v_ab, const MemristorState& s, const MemristorParams& p);

/// One forward-Euler step of the state equation. Holds v_g when the strobe is low.
MemristorState integrate_state(MemristorState s, double v_ab, double dt, const MemristorParams& p);

/// Fixed-step sinusoidal sweep with the strobe held high.
/// Throws StepSizeError unless dt <= 1 / (1000 * frequency).
IvTrace run_iv_sweep(const MemristorParams& p, const SineDrive& drive);

/// Origin residual is the largest |I| among samples with |V| < 1e-6 V.
/// Loop area is the sum of absolute areas of the lobes between sign changes
/// of V, each closed through the origin.
PinchedMetrics pinched_metrics(std::span<const IvSample> samples);

void write_iv_csv(const std::string& path, const IvTrace& trace);

}  // namespace neusoc
