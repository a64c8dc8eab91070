#include <doctest.h>

#include <cmath>
#include <set>

#include "neusoc/rng.hpp"

using namespace neusoc;

TEST_SUITE("rng") {

TEST_CASE("streams are reproducible and distinct") {
    CHECK(stream_seed(1, {2, 3}) == stream_seed(1, {2, 3}));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(stream_seed(7, {a, b}));
    CHECK(seen.size() == 400);
    CHECK(stream_seed(1, {0}) != stream_seed(2, {0}));
    CHECK(stream_seed(1, {1, 2}) != stream_seed(1, {2, 1}));
}

TEST_CASE("uniform range and mean") {
    Rng r(42);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // 4 sigma of the mean of U(0,1).
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("exponential mean") {
    Rng r(3);
    const double rate = 2e5;
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = r.exponential(rate);
        REQUIRE(x >= 0.0);
        sum += x;
    }
    CHECK(std::abs(sum / n * rate - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("same seed same sequence") {
    Rng a(9), b(9);
    for (int i = 0; i < 1000; ++i) CHECK(a.uniform() == b.uniform());
}

}
