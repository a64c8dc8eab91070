#include "neusoc/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "neusoc/errors.hpp"

namespace neusoc {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

Sample parse_line(std::string_view line, std::size_t lineno) {
    Sample s;
    int field = 0;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        const auto tok = trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (field > kPixels) throw ParseError(lineno, "expected 65 fields, found more");
        int value = 0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size())
            throw ParseError(lineno, "field " + std::to_string(field + 1) + " is not an integer");
        if (field < kPixels) {
            if (value < 0 || value > kMaxPixel)
                throw ParseError(lineno, "pixel " + std::to_string(field + 1) + " out of range 0..16");
            s.pixels[static_cast<std::size_t>(field)] = static_cast<std::uint8_t>(value);
        } else {
            if (value < 0 || value >= kClasses) throw ParseError(lineno, "label out of range 0..9");
            s.label = value;
        }
        ++field;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (field != kPixels + 1)
        throw ParseError(lineno, "expected 65 fields, found " + std::to_string(field));
    return s;
}

}  // namespace

Dataset parse_optdigits(std::istream& in, Split split) {
    Dataset ds;
    ds.split = split;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        ds.samples.push_back(parse_line(t, lineno));
    }
    if (ds.samples.empty()) throw ParseError(lineno == 0 ? 1 : lineno, "dataset is empty");
    return ds;
}

Dataset load_optdigits(const std::string& path, Split split) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open dataset '" + path +
                      "' (optdigits.tra / optdigits.tes from the UCI repository, see README)");
    return parse_optdigits(in, split);
}

std::string serialize_optdigits(const Dataset& ds) {
    std::ostringstream os;
    for (const auto& s : ds.samples) {
        for (auto p : s.pixels) os << static_cast<int>(p) << ',';
        os << s.label << '\n';
    }
    return os.str();
}

Dataset subset_digits(const Dataset& ds, const std::set<int>& digits) {
    if (digits.empty()) throw std::invalid_argument("subset_digits: empty digit set");
    for (int d : digits)
        if (d < 0 || d >= kClasses) throw std::invalid_argument("subset_digits: digit out of range 0..9");
    Dataset out;
    out.split = ds.split;
    for (const auto& s : ds.samples)
        if (digits.contains(s.label)) out.samples.push_back(s);
    if (out.samples.empty()) throw std::invalid_argument("subset_digits: no samples with the requested labels");
    return out;
}

std::array<std::size_t, kClasses> class_counts(const Dataset& ds) {
    std::array<std::size_t, kClasses> c{};
    for (const auto& s : ds.samples) ++c[static_cast<std::size_t>(s.label)];
    return c;
}

}  // namespace neusoc
