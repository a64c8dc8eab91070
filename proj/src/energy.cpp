#include "neusoc/energy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "neusoc/csv.hpp"

namespace neusoc {

void EnergyParams::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("energy: ") + what);
    };
    need(eta_sp >= 0 && eta_sp <= 1, "eta_sp must be in [0, 1]");
    need(eta_lrs >= 0 && eta_lrs <= 1, "eta_lrs must be in [0, 1]");
    need(r_lrs > 0 && r_hrs > 0, "resistances must be positive");
    need(r_hrs > r_lrs, "r_hrs must exceed r_lrs");
    need(n_s >= 0 && n_n >= 0 && devices_per_synapse >= 0, "counts must be non-negative");
    need(t_p > 0, "t_p must be positive");
    need(p_n >= 0, "p_n must be non-negative");
    need(!e_n || *e_n >= 0, "e_n must be non-negative");
    need(gpu_baseline > 0, "gpu_baseline must be positive");
}

double spike_energy(double v_eff, double t_p, double r) {
    if (!(r > 0)) throw std::invalid_argument("spike_energy: resistance must be positive");
    if (!(t_p > 0)) throw std::invalid_argument("spike_energy: pulse width must be positive");
    return v_eff * v_eff * t_p / r;
}

double event_energy(const EnergyParams& p) {
    const double synaptic =
        p.eta_sp * p.eta_lrs * p.n_s * p.devices_per_synapse * spike_energy(p.v_eff, p.t_p, p.r_lrs);
    return synaptic + p.n_n * p.neuron_energy();
}

double throughput(double e_snn) {
    if (!(e_snn > 0)) throw std::invalid_argument("throughput: energy must be positive");
    return 1.0 / e_snn;
}

double gpu_acceleration(double tput, double baseline) {
    if (!(baseline > 0)) throw std::invalid_argument("gpu_acceleration: baseline must be positive");
    return tput / baseline;
}

std::vector<TableColumn> default_table_columns() {
    return {{"Low", 100e3, 1.56e-12}, {"Medium", 1e6, 260e-15}, {"High", 10e6, 43.3e-15}};
}

EnergyParams table_inputs() { return EnergyParams{}; }

std::vector<EnergyRow> render_table(const EnergyParams& base, std::span<const TableColumn> columns) {
    if (columns.empty()) throw std::invalid_argument("render_table: no resistance columns");
    std::vector<EnergyRow> rows;
    rows.reserve(columns.size());
    for (const auto& col : columns) {
        EnergyParams p = base;
        p.r_lrs = col.r_lrs;
        if (col.e_n) p.e_n = col.e_n;
        if (p.r_hrs <= p.r_lrs) p.r_hrs = 100.0 * p.r_lrs;
        p.validate();
        EnergyRow r;
        r.label = col.label;
        r.r_lrs = col.r_lrs;
        r.e_spk = spike_energy(p.v_eff, p.t_p, p.r_lrs);
        r.e_n = p.neuron_energy();
        r.e_snn = event_energy(p);
        r.images_per_s_per_w = throughput(r.e_snn);
        r.acceleration = gpu_acceleration(r.images_per_s_per_w, p.gpu_baseline);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
    if (name == "r_lrs") return SweepAxis::RLrs;
    if (name == "t_p") return SweepAxis::TP;
    if (name == "v_eff") return SweepAxis::VEff;
    if (name == "eta_sp") return SweepAxis::EtaSp;
    if (name == "devices") return SweepAxis::Devices;
    return std::nullopt;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::RLrs: return "r_lrs";
        case SweepAxis::TP: return "t_p";
        case SweepAxis::VEff: return "v_eff";
        case SweepAxis::EtaSp: return "eta_sp";
        case SweepAxis::Devices: return "devices";
    }
    return "r_lrs";
}

std::vector<double> sweep_values(const SweepRange& range) {
    if (range.points < 1) throw std::invalid_argument("sweep: points must be >= 1");
    if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.hi < range.lo)
        throw std::invalid_argument("sweep: need finite lo <= hi");
    if (range.log_spaced && !(range.lo > 0)) throw std::invalid_argument("sweep: log spacing needs lo > 0");
    std::vector<double> v(static_cast<std::size_t>(range.points));
    if (range.points == 1) {
        v[0] = range.lo;
        return v;
    }
    const double n = range.points - 1;
    for (int i = 0; i < range.points; ++i) {
        const double f = i / n;
        v[static_cast<std::size_t>(i)] = range.log_spaced
            ? std::exp(std::log(range.lo) + f * (std::log(range.hi) - std::log(range.lo)))
            : range.lo + f * (range.hi - range.lo);
    }
    v.front() = range.lo;
    v.back() = range.hi;
    return v;
}

namespace {

SweepPoint evaluate_point(EnergyParams p, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::RLrs:
            p.r_lrs = value;
            if (p.r_hrs <= p.r_lrs) p.r_hrs = 100.0 * p.r_lrs;
            break;
        case SweepAxis::TP: p.t_p = value; break;
        case SweepAxis::VEff: p.v_eff = value; break;
        case SweepAxis::EtaSp: p.eta_sp = value; break;
        case SweepAxis::Devices: p.devices_per_synapse = value; break;
    }
    p.validate();
    SweepPoint pt;
    pt.value = value;
    pt.e_snn = event_energy(p);
    pt.throughput = throughput(pt.e_snn);
    pt.acceleration = gpu_acceleration(pt.throughput, p.gpu_baseline);
    return pt;
}

}  // namespace

std::vector<SweepPoint> sweep_serial(const EnergyParams& base, SweepAxis axis, const SweepRange& range) {
    const auto values = sweep_values(range);
    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(evaluate_point(base, axis, v));
    return out;
}

std::vector<SweepPoint> sweep(const EnergyParams& base, SweepAxis axis, const SweepRange& range) {
    const auto values = sweep_values(range);
    std::vector<SweepPoint> out(values.size());
    const auto n = static_cast<long>(values.size());
    // Validation errors must not escape an OpenMP region; check serially first.
    evaluate_point(base, axis, values.front());
    evaluate_point(base, axis, values.back());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = evaluate_point(base, axis, values[k]);
    }
    return out;
}

void write_energy_table_csv(const std::string& path, std::span<const EnergyRow> rows) {
    CsvWriter out(path, {"label", "R_lrs_ohm", "E_spk_J", "E_N_J", "E_SNN_J", "img_per_s_per_W", "accel_over_gpu"});
    for (const auto& r : rows)
        out.row(r.label, r.r_lrs, r.e_spk, r.e_n, r.e_snn, r.images_per_s_per_w, r.acceleration);
}

namespace {

std::string eng(double v, const char* unit) {
    static constexpr struct { double scale; const char* prefix; } kPrefixes[] = {
        {1e6, "M"}, {1e3, "k"}, {1.0, ""}, {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"}, {1e-15, "f"}};
    for (const auto& p : kPrefixes) {
        if (std::abs(v) >= p.scale) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.4g %s%s", v / p.scale, p.prefix, unit);
            return buf;
        }
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g %s", v, unit);
    return buf;
}

}  // namespace

std::string format_energy_table(std::span<const EnergyRow> rows, const EnergyParams& base) {
    std::ostringstream os;
    char line[256];
    auto emit = [&](const char* name, auto&& cell) {
        std::snprintf(line, sizeof line, "%-26s", name);
        os << line;
        for (const auto& r : rows) {
            std::snprintf(line, sizeof line, " %14s", cell(r).c_str());
            os << line;
        }
        os << '\n';
    };
    emit("", [](const EnergyRow& r) { return r.label; });
    emit("Spike width T_p", [&](const EnergyRow&) { return eng(base.t_p, "s"); });
    emit("Spike amplitude V_p", [&](const EnergyRow&) { return eng(base.v_p, "V"); });
    emit("Effective spike V_eff", [&](const EnergyRow&) { return eng(base.v_eff, "V"); });
    emit("ON state resistance", [](const EnergyRow& r) { return eng(r.r_lrs, "Ohm"); });
    emit("Single spike energy", [](const EnergyRow& r) { return eng(r.e_spk, "J"); });
    emit("Neuron energy E_N", [](const EnergyRow& r) { return eng(r.e_n, "J"); });
    emit("Neuron sparsity", [&](const EnergyRow&) { return eng(base.eta_sp, ""); });
    emit("On state RRAM ratio", [&](const EnergyRow&) { return eng(base.eta_lrs, ""); });
    emit("Devices per synapse", [&](const EnergyRow&) { return eng(base.devices_per_synapse, ""); });
    emit("Single event energy", [](const EnergyRow& r) { return eng(r.e_snn, "J"); });
    emit("Images / s / W", [](const EnergyRow& r) { return eng(r.images_per_s_per_w, ""); });
    emit("Acceleration over GPU", [](const EnergyRow& r) { return "x" + eng(r.acceleration, ""); });
    return os.str();
}

void write_sweep_csv(const std::string& path, SweepAxis axis, std::span<const SweepPoint> points) {
    CsvWriter out(path, {to_string(axis), "E_SNN_J", "img_per_s_per_W", "accel_over_gpu"});
    for (const auto& p : points) out.row(p.value, p.e_snn, p.throughput, p.acceleration);
}

}  // namespace neusoc
