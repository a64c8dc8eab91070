#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "neusoc/dataset.hpp"
#include "neusoc/errors.hpp"

using namespace neusoc;

namespace {

const std::string kFixture = std::string(NEUSOC_FIXTURE_DIR) + "/optdigits_20.csv";
const std::string kDataDir = std::string(NEUSOC_SOURCE_DIR) + "/data/optdigits";

std::string line_of(int pixel, int label, int fields = 64) {
    std::string s;
    for (int i = 0; i < fields; ++i) s += std::to_string(pixel) + ",";
    return s + std::to_string(label);
}

std::size_t error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_optdigits(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("fixture loads") {
    const auto ds = load_optdigits(kFixture);
    CHECK(ds.size() == 20);
    const auto counts = class_counts(ds);
    for (auto c : counts) CHECK(c == 2);
}

TEST_CASE("parse errors carry the line number") {
    const std::string good = line_of(3, 1);
    CHECK(error_line(good + "\n" + line_of(3, 1, 63) + "\n") == 2);
    CHECK(error_line(good + "\n" + good + "\n" + line_of(3, 1, 65) + "\n") == 3);
    CHECK(error_line(line_of(17, 1) + "\n") == 1);
    CHECK(error_line(good + "\n" + line_of(3, 10) + "\n") == 2);
    CHECK(error_line(good + "\n" + line_of(-1, 1) + "\n") == 2);
    CHECK(error_line("1,2,x\n") == 1);
    CHECK(error_line("") == 1);
    CHECK(error_line("\n\n") != 0);
    std::istringstream ok(good + "\r\n" + good + "\n");
    CHECK(parse_optdigits(ok).size() == 2);
}

TEST_CASE("missing file names the dataset") {
    CHECK_THROWS_AS(load_optdigits("/nonexistent/optdigits.tra"), IoError);
    try {
        load_optdigits("/nonexistent/optdigits.tra");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("UCI") != std::string::npos);
    }
}

TEST_CASE("round trip") {
    std::ifstream in(kFixture);
    std::stringstream raw;
    raw << in.rdbuf();
    std::istringstream again(raw.str());
    const auto ds = parse_optdigits(again);
    CHECK(serialize_optdigits(ds) == raw.str());
}

TEST_CASE("subsets") {
    const auto ds = load_optdigits(kFixture);
    const auto all = subset_digits(ds, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(serialize_optdigits(all) == serialize_optdigits(ds));
    const auto four = subset_digits(ds, {0, 1, 2, 3});
    CHECK(four.size() == 8);
    for (std::size_t i = 1; i < four.size(); ++i) CHECK(four.samples[i - 1].label <= 3);
    CHECK_THROWS(subset_digits(ds, {}));
    CHECK_THROWS(subset_digits(ds, {10}));
}

TEST_CASE("official splits") {
    const auto tra = kDataDir + "/optdigits.tra";
    const auto tes = kDataDir + "/optdigits.tes";
    if (!std::filesystem::exists(tra) || !std::filesystem::exists(tes)) {
        MESSAGE("optdigits files not present; skipped");
        return;
    }
    const auto train = load_optdigits(tra, Split::Train);
    const auto test = load_optdigits(tes, Split::Test);
    CHECK(train.size() == 3823);
    CHECK(test.size() == 1797);
    for (auto c : class_counts(train)) CHECK(c > 0);
    for (auto c : class_counts(test)) CHECK(c > 0);

    // Independent count by scanning the raw file for the last field.
    std::ifstream in(tes);
    std::string line;
    std::size_t direct = 0;
    while (std::getline(in, line)) {
        const auto label = line.substr(line.rfind(',') + 1);
        const int l = std::stoi(label);
        if (l >= 0 && l <= 3) ++direct;
    }
    CHECK(subset_digits(test, {0, 1, 2, 3}).size() == direct);
}

}
