#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "neusoc/config.hpp"
#include "neusoc/dataset.hpp"
#include "neusoc/network.hpp"

using namespace neusoc;

namespace {

const std::string kSource = NEUSOC_SOURCE_DIR;

bool have_data() {
    return std::filesystem::exists(kSource + "/data/optdigits/optdigits.tra") &&
           std::filesystem::exists(kSource + "/data/optdigits/optdigits.tes");
}

NetworkConfig network_from(const std::string& cfg_file) {
    auto cfg = load_config(kSource + "/configs/" + cfg_file);
    cfg.finalize();
    return cfg.network;
}

Dataset train_split() { return load_optdigits(kSource + "/data/optdigits/optdigits.tra", Split::Train); }

/// Pearson correlation of two 64-pixel maps.
double correlation(const std::array<double, kPixels>& a, const std::array<double, kPixels>& b) {
    double ma = 0, mb = 0;
    for (int i = 0; i < kPixels; ++i) {
        ma += a[static_cast<std::size_t>(i)];
        mb += b[static_cast<std::size_t>(i)];
    }
    ma /= kPixels;
    mb /= kPixels;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < kPixels; ++i) {
        const double da = a[static_cast<std::size_t>(i)] - ma, db = b[static_cast<std::size_t>(i)] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return sab / std::sqrt(saa * sbb);
}

void check_no_floor_column(const Network& net) {
    for (int k = 0; k < net.config().n_out; ++k) {
        bool all_floor = true;
        for (int i = 0; i < kPixels; ++i) all_floor = all_floor && net.weight(i, k) == net.config().w_min;
        CHECK_MESSAGE(!all_floor, "column " << k << " is entirely at w_min");
    }
}

}  // namespace

TEST_SUITE("network_data") {

TEST_CASE("analog training learns digit templates") {
    if (!have_data()) {
        MESSAGE("optdigits files not present; skipped");
        return;
    }
    const auto ds = train_split();
    Network net(network_from("default.cfg"));
    net.train(ds);
    check_no_floor_column(net);

    std::array<std::array<double, kPixels>, kClasses> mean{};
    const auto counts = class_counts(ds);
    for (const auto& s : ds.samples)
        for (int i = 0; i < kPixels; ++i)
            mean[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(i)] +=
                s.pixels[static_cast<std::size_t>(i)] / static_cast<double>(counts[static_cast<std::size_t>(s.label)]);
    const auto maps = net.weight_maps();
    for (int k = 0; k < kClasses; ++k)
        CHECK(correlation(maps[static_cast<std::size_t>(k)], mean[static_cast<std::size_t>(k)]) > 0);
}

TEST_CASE("teacher wins the first spike after warm-up") {
    if (!have_data()) {
        MESSAGE("optdigits files not present; skipped");
        return;
    }
    const auto ds = train_split();
    auto cfg = network_from("default.cfg");
    cfg.max_samples = 500;
    Network net(cfg);
    net.train(ds);
    int first_is_label = 0, presented = 0;
    for (std::size_t n = 500; n < 1000; ++n) {
        const auto& s = ds.samples[n];
        const auto r = net.present_sample(encode_image(s.pixels, cfg, n), s.label, true);
        ++presented;
        if (!r.fires.empty() && r.fires.front().neuron == s.label) ++first_is_label;
    }
    CHECK(first_is_label >= 0.9 * presented);
}

TEST_CASE("bistable training keeps every column off the floor") {
    if (!have_data()) {
        MESSAGE("optdigits files not present; skipped");
        return;
    }
    Network net(network_from("bistable.cfg"));
    const auto rep = net.train(train_split());
    CHECK(rep.samples_presented == 500);
    CHECK(rep.undecided_after_settle == 0);
    check_no_floor_column(net);
}

}
