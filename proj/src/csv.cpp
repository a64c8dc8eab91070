#include "neusoc/csv.hpp"

#include "neusoc/errors.hpp"

#include <charconv>
#include <system_error>

namespace neusoc {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::string& path, std::initializer_list<std::string_view> header)
    : out_(path) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    bool first = true;
    for (auto h : header) emit(h, first);
    out_ << '\n';
}

}  // namespace neusoc
