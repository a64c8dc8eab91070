#pragma once

#include <concepts>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace neusoc {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

/// Minimal CSV emitter. Doubles are written in shortest round-trip form so
/// reruns are byte-identical and no precision is lost.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string_view> header);

    template <class... Ts>
    void row(const Ts&... fields) {
        bool first = true;
        ((emit(fields, first)), ...);
        out_ << '\n';
    }

private:
    void emit(double v, bool& first) { sep(first); out_ << format_double(v); }
    void emit(std::string_view v, bool& first) { sep(first); out_ << v; }
    void emit(const std::string& v, bool& first) { sep(first); out_ << v; }
    void emit(const char* v, bool& first) { sep(first); out_ << v; }
    template <std::integral I>
    void emit(I v, bool& first) { sep(first); out_ << v; }

    void sep(bool& first) {
        if (!first) out_ << ',';
        first = false;
    }

    std::ofstream out_;
};

}  // namespace neusoc
