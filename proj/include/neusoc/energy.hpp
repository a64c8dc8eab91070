#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neusoc {

/// Inputs of the per-event SNN energy model
///   E_SNN = eta_sp * eta_lrs * N_s * M * E_spk + N_n * P_n * T_p
/// with E_spk = v_eff^2 * T_p / R_lrs and M devices per compound synapse.
///
/// Defaults are the AlexNet-scale column inputs (61M synapses, 640k neurons,
/// 100 ns spikes, 0.6 / 0.5 activity fractions). v_p keeps the listed 300 mV
/// spike amplitude for reference; the synaptic term uses v_eff, which has to
/// be the 1.2 V rail for the reference E_SNN values to come out.
struct EnergyParams {
    double v_p = 0.3;
    double v_eff = 1.2;
    double t_p = 100e-9;
    double r_lrs = 1e6;
    double r_hrs = 100e6;
    double eta_sp = 0.6;
    double eta_lrs = 0.5;
    double n_s = 61e6;
    double n_n = 640e3;
    /// Neuron power. Ignored when e_n is set.
    double p_n = 2.6e-6;
    /// Per-neuron energy per event (= p_n * t_p); takes precedence over p_n.
    std::optional<double> e_n;
    double devices_per_synapse = 16;
    double gpu_baseline = 170.0;  // images/s/W

    void validate() const;
    double neuron_energy() const { return e_n ? *e_n : p_n * t_p; }
};

struct EnergyRow {
    std::string label;
    double r_lrs = 0.0;
    double e_spk = 0.0;
    double e_n = 0.0;
    double e_snn = 0.0;
    double images_per_s_per_w = 0.0;
    double acceleration = 0.0;
};

/// One resistance column of the table, optionally with its own neuron energy.
struct TableColumn {
    std::string label;
    double r_lrs = 0.0;
    std::optional<double> e_n;
};

double spike_energy(double v_eff, double t_p, double r);
double event_energy(const EnergyParams& p);
double throughput(double e_snn);
double gpu_acceleration(double throughput, double baseline);

/// Low / Medium / High columns at 100k / 1M / 10M with their neuron energies.
std::vector<TableColumn> default_table_columns();
EnergyParams table_inputs();

std::vector<EnergyRow> render_table(const EnergyParams& base, std::span<const TableColumn> columns);

enum class SweepAxis { RLrs, TP, VEff, EtaSp, Devices };

std::optional<SweepAxis> parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepPoint {
    double value = 0.0;
    double e_snn = 0.0;
    double throughput = 0.0;
    double acceleration = 0.0;
};

/// Evenly spaced (linear) or log-spaced points from lo to hi inclusive.
struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int points = 1;
    bool log_spaced = false;
};

std::vector<double> sweep_values(const SweepRange& range);

/// Serial reference sweep.
std::vector<SweepPoint> sweep_serial(const EnergyParams& base, SweepAxis axis, const SweepRange& range);
/// OpenMP sweep; identical output to the serial one.
std::vector<SweepPoint> sweep(const EnergyParams& base, SweepAxis axis, const SweepRange& range);

void write_energy_table_csv(const std::string& path, std::span<const EnergyRow> rows);
std::string format_energy_table(std::span<const EnergyRow> rows, const EnergyParams& base);
void write_sweep_csv(const std::string& path, SweepAxis axis, std::span<const SweepPoint> points);

}  // namespace neusoc
