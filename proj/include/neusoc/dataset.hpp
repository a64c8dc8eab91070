#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace neusoc {

inline constexpr int kImageSide = 8;
inline constexpr int kPixels = kImageSide * kImageSide;
inline constexpr int kMaxPixel = 16;
inline constexpr int kClasses = 10;

using Image = std::array<std::uint8_t, kPixels>;

struct Sample {
    Image pixels{};
    int label = 0;
};

enum class Split { Train, Test };

/// UCI optdigits: 8x8 bitmaps with pixel counts 0..16 and labels 0..9.
struct Dataset {
    std::vector<Sample> samples;
    Split split = Split::Train;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/// Parses 65 comma-separated integers per line (64 pixels, then the label).
/// Blank lines are skipped. Throws ParseError with the 1-based line number
/// for wrong field counts, non-integers, or out-of-range values, and for an
/// empty input. Throws IoError if the file cannot be opened.
Dataset load_optdigits(const std::string& path, Split split = Split::Train);
Dataset parse_optdigits(std::istream& in, Split split = Split::Train);

/// Normalized CSV form: one sample per line, no spaces, trailing newline.
std::string serialize_optdigits(const Dataset& ds);

/// Keeps samples whose label is in `digits`, preserving order.
/// Throws std::invalid_argument for an empty digit set, digits outside 0..9,
/// or an empty result.
Dataset subset_digits(const Dataset& ds, const std::set<int>& digits);

std::array<std::size_t, kClasses> class_counts(const Dataset& ds);

}  // namespace neusoc
