#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cch/graph.hpp"
#include "cch/types.hpp"

// Readers and writers for the 9th DIMACS Implementation Challenge text
// formats: `.gr` graphs (p sp n m / a u v w, 1-based ids) and `.co`
// coordinate files (p aux sp co n / v id x y).

namespace cch {

namespace detail {

inline void fail_parse(const char* what, std::size_t line_number) {
    throw ParseError(std::string(what) + " at line " + std::to_string(line_number));
}

inline bool next_token(std::string_view& rest, std::string_view& token) {
    std::size_t start = rest.find_first_not_of(" \t\r");
    if (start == std::string_view::npos) return false;
    std::size_t end = rest.find_first_of(" \t\r", start);
    token = rest.substr(start, end == std::string_view::npos ? rest.size() - start : end - start);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    return true;
}

template <typename Int>
inline Int parse_int(std::string_view& rest, std::size_t line_number, const char* what) {
    std::string_view token;
    if (!next_token(rest, token)) fail_parse(what, line_number);
    Int value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) fail_parse(what, line_number);
    return value;
}

}  // namespace detail

inline Graph parse_dimacs_gr(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    Vertex num_vertices = 0;
    std::uint64_t num_arcs_declared = 0;
    bool have_header = false;
    std::vector<std::tuple<Vertex, Vertex, Weight>> arcs;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view rest(line);
        std::string_view tag;
        if (!detail::next_token(rest, tag) || tag == "c") continue;
        if (tag == "p") {
            std::string_view kind;
            if (have_header || !detail::next_token(rest, kind) || kind != "sp")
                detail::fail_parse("malformed header", line_number);
            num_vertices = detail::parse_int<Vertex>(rest, line_number, "malformed header");
            num_arcs_declared =
                detail::parse_int<std::uint64_t>(rest, line_number, "malformed header");
            have_header = true;
            arcs.reserve(num_arcs_declared);
        } else if (tag == "a") {
            if (!have_header) detail::fail_parse("arc before header", line_number);
            const auto tail = detail::parse_int<std::int64_t>(rest, line_number, "malformed arc");
            const auto head = detail::parse_int<std::int64_t>(rest, line_number, "malformed arc");
            const auto weight = detail::parse_int<std::int64_t>(rest, line_number, "malformed arc");
            if (tail < 1 || tail > num_vertices || head < 1 || head > num_vertices)
                detail::fail_parse("vertex id out of range", line_number);
            if (weight < 0) detail::fail_parse("negative arc weight", line_number);
            if (weight > INFINITE_WEIGHT) detail::fail_parse("arc weight too large", line_number);
            arcs.emplace_back(static_cast<Vertex>(tail - 1), static_cast<Vertex>(head - 1),
                              static_cast<Weight>(weight));
        } else {
            detail::fail_parse("unknown line tag", line_number);
        }
    }
    if (!have_header) detail::fail_parse("missing header", line_number + 1);
    if (arcs.size() != num_arcs_declared) detail::fail_parse("arc count mismatch", line_number + 1);
    return Graph(num_vertices, std::move(arcs));
}

inline Coordinates parse_dimacs_co(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    Vertex num_vertices = 0;
    bool have_header = false;
    Coordinates c;
    std::vector<bool> seen;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view rest(line);
        std::string_view tag;
        if (!detail::next_token(rest, tag) || tag == "c") continue;
        if (tag == "p") {
            // Header is "p aux sp co n"; the vertex count is the last token.
            std::string_view token, last;
            while (detail::next_token(rest, token)) last = token;
            std::string_view count_view(last);
            num_vertices = detail::parse_int<Vertex>(count_view, line_number, "malformed header");
            have_header = true;
            c.x.resize(num_vertices, 0);
            c.y.resize(num_vertices, 0);
            seen.resize(num_vertices, false);
            continue;
        }
        if (tag != "v") detail::fail_parse("unknown line tag", line_number);
        if (!have_header) detail::fail_parse("vertex line before header", line_number);
        const auto id = detail::parse_int<std::int64_t>(rest, line_number, "malformed vertex line");
        const auto x = detail::parse_int<std::int64_t>(rest, line_number, "malformed vertex line");
        const auto y = detail::parse_int<std::int64_t>(rest, line_number, "malformed vertex line");
        if (id < 1 || id > num_vertices) detail::fail_parse("vertex id out of range", line_number);
        c.x[id - 1] = static_cast<std::int32_t>(x);
        c.y[id - 1] = static_cast<std::int32_t>(y);
        seen[id - 1] = true;
    }
    if (!have_header) detail::fail_parse("missing header", line_number + 1);
    for (Vertex v = 0; v < num_vertices; ++v)
        if (!seen[v])
            throw ParseError("missing coordinates for vertex " + std::to_string(v + 1));
    return c;
}

inline void write_dimacs_gr(std::ostream& out, const Graph& g) {
    out << "p sp " << g.num_vertices() << ' ' << g.num_arcs() << '\n';
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        for (EdgeId e = g.first_out(v); e < g.first_out(v + 1); ++e)
            out << "a " << v + 1 << ' ' << g.head(e) + 1 << ' ' << g.length(e) << '\n';
}

inline void write_dimacs_co(std::ostream& out, const Coordinates& c) {
    out << "p aux sp co " << c.size() << '\n';
    for (std::size_t v = 0; v < c.size(); ++v)
        out << "v " << v + 1 << ' ' << c.x[v] << ' ' << c.y[v] << '\n';
}

}  // namespace cch
