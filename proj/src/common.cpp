#include "semsel/common.hpp"

#include <charconv>
#include <system_error>

namespace semsel {

void require_dims(std::span<const std::size_t> dims, std::size_t bound, const char* what) {
    if (dims.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty dimension set");
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] >= bound) {
            throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(dims[i]) +
                                        " out of range");
        }
        if (i > 0 && dims[i] <= dims[i - 1]) {
            throw std::invalid_argument(std::string(what) + ": dimensions must be strictly ascending");
        }
    }
}

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, end);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("not a number: '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace semsel
