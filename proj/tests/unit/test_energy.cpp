#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "neusoc/energy.hpp"

using namespace neusoc;

namespace {

/// Rounds to n significant figures.
double sig(double v, int n) {
    if (v == 0) return 0;
    const double scale = std::pow(10.0, n - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
    return std::round(v * scale) / scale;
}

/// Hand arithmetic of the event energy, written out independently.
double hand_e_snn(double m, double v, double r, double e_n) {
    const double e_spk = v * v * 100e-9 / r;
    return 0.6 * 0.5 * 61e6 * m * e_spk + 640e3 * e_n;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("spike energy") {
    CHECK(spike_energy(1.2, 100e-9, 100e3) == doctest::Approx(1.44e-12).epsilon(1e-12));
    CHECK(std::abs(spike_energy(1.2, 100e-9, 100e3) - 1.4e-12) / 1.4e-12 < 0.03);
    CHECK(spike_energy(1.2, 100e-9, 10e6) == doctest::Approx(14.4e-15).epsilon(1e-12));
    CHECK(spike_energy(1.2, 100e-9, 1e18) < 1e-24);
    CHECK(spike_energy(1.2, 100e-9, 1e6) > spike_energy(1.2, 100e-9, 2e6));
    CHECK_THROWS_AS(spike_energy(1.2, 100e-9, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(spike_energy(1.2, 0.0, 1e6), std::invalid_argument);
}

TEST_CASE("brute force: 16 devices at 1.2 V is the unique exact reconstruction") {
    const double targets[3] = {422.6e-6, 42.33e-6, 4.244e-6};
    const double r[3] = {100e3, 1e6, 10e6};
    const double e_n[3] = {1.56e-12, 260e-15, 43.3e-15};
    int matches = 0;
    int found_m = 0;
    double found_v = 0;
    for (int m = 1; m <= 32; ++m) {
        for (double v : {0.3, 0.6, 1.2}) {
            bool all = true;
            for (int k = 0; k < 3; ++k) all = all && sig(hand_e_snn(m, v, r[k], e_n[k]), 4) == sig(targets[k], 4);
            if (all) {
                ++matches;
                found_m = m;
                found_v = v;
            }
        }
    }
    CHECK(matches == 1);
    CHECK(found_m == 16);
    CHECK(found_v == 1.2);
}

TEST_CASE("event energy") {
    EnergyParams p = table_inputs();
    p.r_lrs = 1e6;
    p.e_n = 260e-15;
    CHECK(event_energy(p) == doctest::Approx(hand_e_snn(16, 1.2, 1e6, 260e-15)).epsilon(1e-12));
    CHECK(sig(event_energy(p), 4) == sig(42.33e-6, 4));
    p.r_lrs = 10e6;
    p.e_n = 43.3e-15;
    CHECK(sig(event_energy(p), 4) == sig(4.244e-6, 4));
    p.eta_sp = 0;
    CHECK(event_energy(p) == doctest::Approx(640e3 * 43.3e-15).epsilon(1e-12));
    p = EnergyParams{};
    CHECK(p.neuron_energy() == doctest::Approx(p.p_n * p.t_p).epsilon(1e-12));
}

TEST_CASE("throughput and acceleration") {
    CHECK(sig(throughput(422.6e-6), 2) == 2400);
    CHECK(sig(throughput(4.244e-6), 3) == 236000);
    CHECK(throughput(1.0) == 1.0);
    CHECK_THROWS_AS(throughput(0.0), std::invalid_argument);
    CHECK(sig(gpu_acceleration(2366, 170), 2) == 14);
    CHECK(gpu_acceleration(23.6e3, 170) == doctest::Approx(139).epsilon(0.005));
    CHECK(gpu_acceleration(170, 170) == 1.0);
    CHECK_THROWS_AS(gpu_acceleration(1, 0), std::invalid_argument);
}

TEST_CASE("table rows") {
    const auto rows = render_table(table_inputs(), default_table_columns());
    REQUIRE(rows.size() == 3);
    CHECK(sig(rows[0].e_snn, 4) == sig(422.6e-6, 4));
    CHECK(sig(rows[1].e_snn, 4) == sig(42.33e-6, 4));
    CHECK(sig(rows[2].e_snn, 4) == sig(4.244e-6, 4));
    CHECK(sig(rows[0].images_per_s_per_w, 2) == sig(2.4e3, 2));
    CHECK(sig(rows[1].images_per_s_per_w, 2) == sig(23.6e3, 2));
    CHECK(sig(rows[2].images_per_s_per_w, 2) == sig(235e3, 2));
    CHECK(sig(rows[0].acceleration, 2) == 14);
    CHECK(sig(rows[1].acceleration, 2) == sig(139, 2));
    CHECK(sig(rows[2].acceleration, 2) == sig(1.38e3, 2));
    CHECK(rows[0].e_snn > rows[1].e_snn);
    CHECK(rows[1].e_snn > rows[2].e_snn);

    const std::vector<TableColumn> one{{"only", 1e6, 260e-15}};
    auto base = table_inputs();
    const auto single = render_table(base, one);
    REQUIRE(single.size() == 1);
    base.r_lrs = 1e6;
    base.e_n = 260e-15;
    CHECK(single[0].e_snn == event_energy(base));
    CHECK_THROWS(render_table(table_inputs(), std::vector<TableColumn>{}));
}

TEST_CASE("property: linearity and monotonicity") {
    EnergyParams p = table_inputs();
    p.e_n = 0.0;
    const double e0 = event_energy(p);
    auto q = p;
    q.n_s *= 3;
    CHECK(event_energy(q) == doctest::Approx(3 * e0).epsilon(1e-12));
    q = p;
    q.devices_per_synapse *= 2;
    CHECK(event_energy(q) == doctest::Approx(2 * e0).epsilon(1e-12));
    q = p;
    q.eta_sp = 0.3;
    CHECK(event_energy(q) == doctest::Approx(0.5 * e0).epsilon(1e-12));
    p.e_n.reset();
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 1e4; r < 1e8; r *= 1.5) {
        p.r_lrs = r;
        p.r_hrs = 100 * r;
        const double e = event_energy(p);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("sweeps") {
    const auto base = table_inputs();
    SUBCASE("one point equals the table") {
        const auto pts = sweep_serial(base, SweepAxis::RLrs, {1e6, 1e6, 1, false});
        REQUIRE(pts.size() == 1);
        auto b = base;
        b.r_lrs = 1e6;
        CHECK(pts[0].e_snn == event_energy(b));
    }
    SUBCASE("doubling t_p doubles the energy with fixed p_n") {
        EnergyParams b;
        const auto pts = sweep_serial(b, SweepAxis::TP, {100e-9, 200e-9, 2, false});
        CHECK(pts[1].e_snn == doctest::Approx(2 * pts[0].e_snn).epsilon(1e-12));
    }
    SUBCASE("devices 1 to 16 scale the synaptic term 16x") {
        EnergyParams b;
        b.e_n = 0.0;
        const auto pts = sweep_serial(b, SweepAxis::Devices, {1, 16, 16, false});
        CHECK(pts.back().e_snn == doctest::Approx(16 * pts.front().e_snn).epsilon(1e-12));
    }
    SUBCASE("log spacing hits both ends") {
        const auto v = sweep_values({1e5, 1e7, 3, true});
        REQUIRE(v.size() == 3);
        CHECK(v[0] == 1e5);
        CHECK(v[1] == doctest::Approx(1e6).epsilon(1e-12));
        CHECK(v[2] == 1e7);
    }
    SUBCASE("parallel sweep is identical to the serial one") {
        for (auto axis : {SweepAxis::RLrs, SweepAxis::TP, SweepAxis::VEff, SweepAxis::EtaSp, SweepAxis::Devices}) {
            SweepRange range{0.1, 0.9, 257, false};
            if (axis == SweepAxis::RLrs) range = {1e4, 1e7, 257, true};
            if (axis == SweepAxis::TP) range = {1e-8, 1e-6, 257, true};
            if (axis == SweepAxis::Devices) range = {1, 64, 64, false};
            const auto a = sweep_serial(base, axis, range);
            const auto b = sweep(base, axis, range);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].value == b[i].value);
                CHECK(a[i].e_snn == b[i].e_snn);
                CHECK(a[i].throughput == b[i].throughput);
            }
        }
    }
    SUBCASE("invalid ranges") {
        CHECK_THROWS(sweep_values({1, 2, 0, false}));
        CHECK_THROWS(sweep_values({0, 2, 3, true}));
        CHECK_THROWS(sweep(base, SweepAxis::EtaSp, {0.5, 1.5, 3, false}));
    }
    SUBCASE("axis names") {
        for (auto axis : {SweepAxis::RLrs, SweepAxis::TP, SweepAxis::VEff, SweepAxis::EtaSp, SweepAxis::Devices})
            CHECK(parse_sweep_axis(to_string(axis)) == axis);
        CHECK_FALSE(parse_sweep_axis("bogus").has_value());
    }
}

TEST_CASE("parameter validation") {
    EnergyParams p;
    CHECK_NOTHROW(p.validate());
    p.eta_sp = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = EnergyParams{};
    p.r_hrs = p.r_lrs / 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}
