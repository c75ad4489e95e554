#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace cch {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::uint32_t;

inline constexpr Vertex INVALID_VERTEX = std::numeric_limits<Vertex>::max();
inline constexpr Weight INFINITE_WEIGHT = std::numeric_limits<Weight>::max();

// Saturating addition: INFINITE_WEIGHT is absorbing, sums clamp instead of wrapping.
inline Weight add_weights(Weight a, Weight b) {
    const std::uint64_t sum = std::uint64_t{a} + std::uint64_t{b};
    return sum >= INFINITE_WEIGHT ? INFINITE_WEIGHT : static_cast<Weight>(sum);
}

// Thrown on malformed input files; carries the offending file/line for the CLI.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an internal invariant is violated (CLI exit code 3).
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace cch
