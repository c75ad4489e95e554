#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "cch/cch.hpp"
#include "cch/separator_tree.hpp"
#include "cch/types.hpp"

// Binary file formats, all 32-bit little-endian:
//   SDT1 - separator decomposition tree: magic, node count, then per node
//          (parent, first child, child count, first/last/first-separator
//          vertex).
//   CCH1 - self-contained query bundle: magic, vertex counts, customization
//          flag, rank array over the input ids, search graph adjacency and
//          weight arrays, elimination tree parents, and the permuted input
//          graph.
// Rank files are a plain array of 32-bit ranks with no header.

namespace cch {

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t value) {
    std::array<char, 4> bytes{static_cast<char>(value), static_cast<char>(value >> 8),
                              static_cast<char>(value >> 16), static_cast<char>(value >> 24)};
    out.write(bytes.data(), 4);
}

inline std::uint32_t read_u32(std::istream& in, const char* context) {
    std::array<unsigned char, 4> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), 4))
        throw ParseError(std::string("unexpected end of file in ") + context);
    return std::uint32_t{bytes[0]} | std::uint32_t{bytes[1]} << 8 | std::uint32_t{bytes[2]} << 16 |
           std::uint32_t{bytes[3]} << 24;
}

inline void write_u32_vector(std::ostream& out, const std::vector<std::uint32_t>& values) {
    write_u32(out, static_cast<std::uint32_t>(values.size()));
    for (std::uint32_t v : values) write_u32(out, v);
}

inline std::vector<std::uint32_t> read_u32_vector(std::istream& in, const char* context) {
    const std::uint32_t count = read_u32(in, context);
    std::vector<std::uint32_t> values(count);
    for (std::uint32_t& v : values) v = read_u32(in, context);
    return values;
}

inline void expect_magic(std::istream& in, const char* magic, const char* context) {
    std::array<char, 4> bytes;
    if (!in.read(bytes.data(), 4) || std::memcmp(bytes.data(), magic, 4) != 0)
        throw ParseError(std::string("bad magic in ") + context);
}

}  // namespace detail

inline void write_sep_decomp_tree(std::ostream& out, const SepDecompTree& tree) {
    out.write("SDT1", 4);
    detail::write_u32(out, tree.num_nodes());
    for (const SepDecompNode& node : tree.nodes) {
        detail::write_u32(out, node.parent);
        detail::write_u32(out, node.first_child);
        detail::write_u32(out, node.num_children);
        detail::write_u32(out, node.first_vertex);
        detail::write_u32(out, node.last_vertex);
        detail::write_u32(out, node.first_sep_vertex);
    }
}

inline SepDecompTree read_sep_decomp_tree(std::istream& in) {
    detail::expect_magic(in, "SDT1", "separator decomposition file");
    const std::uint32_t count = detail::read_u32(in, "separator decomposition file");
    SepDecompTree tree;
    tree.nodes.resize(count);
    for (SepDecompNode& node : tree.nodes) {
        node.parent = detail::read_u32(in, "separator decomposition file");
        node.first_child = detail::read_u32(in, "separator decomposition file");
        node.num_children = detail::read_u32(in, "separator decomposition file");
        node.first_vertex = detail::read_u32(in, "separator decomposition file");
        node.last_vertex = detail::read_u32(in, "separator decomposition file");
        node.first_sep_vertex = detail::read_u32(in, "separator decomposition file");
    }
    if (tree.nodes.empty()) throw ParseError("separator decomposition file has no nodes");
    return tree;
}

// Everything the query phases need, as stored in a CCH1 file. rank_of_input
// maps ids of the original input graph to ranks; vertices outside the
// extracted strongly connected component map to INVALID_VERTEX.
struct CchFile {
    Cch cch;
    std::vector<Vertex> rank_of_input;
    bool customized = false;
};

inline void write_cch_file(std::ostream& out, const CchFile& file) {
    const Cch& cch = file.cch;
    const Vertex n = cch.up.num_vertices();
    out.write("CCH1", 4);
    detail::write_u32(out, n);
    detail::write_u32(out, file.customized ? 1 : 0);
    detail::write_u32_vector(out, file.rank_of_input);
    detail::write_u32_vector(out, cch.up.first);
    detail::write_u32_vector(out, cch.up.head);
    detail::write_u32_vector(out, cch.up.up_weight);
    detail::write_u32_vector(out, cch.up.down_weight);
    detail::write_u32_vector(out, cch.up.orig_up);
    detail::write_u32_vector(out, cch.up.orig_down);
    detail::write_u32_vector(out, cch.elim.parent);
    std::vector<std::uint32_t> g_first(n + 1), g_head(cch.graph.num_arcs()),
        g_length(cch.graph.num_arcs());
    for (Vertex v = 0; v <= n; ++v) g_first[v] = v < n ? cch.graph.first_out(v) : cch.graph.num_arcs();
    for (EdgeId e = 0; e < cch.graph.num_arcs(); ++e) {
        g_head[e] = cch.graph.head(e);
        g_length[e] = cch.graph.length(e);
    }
    detail::write_u32_vector(out, g_first);
    detail::write_u32_vector(out, g_head);
    detail::write_u32_vector(out, g_length);
}

inline CchFile read_cch_file(std::istream& in) {
    static constexpr const char* CTX = "CCH file";
    detail::expect_magic(in, "CCH1", CTX);
    const Vertex n = detail::read_u32(in, CTX);
    CchFile file;
    file.customized = detail::read_u32(in, CTX) != 0;
    file.rank_of_input = detail::read_u32_vector(in, CTX);
    file.cch.up.first = detail::read_u32_vector(in, CTX);
    file.cch.up.head = detail::read_u32_vector(in, CTX);
    file.cch.up.up_weight = detail::read_u32_vector(in, CTX);
    file.cch.up.down_weight = detail::read_u32_vector(in, CTX);
    file.cch.up.orig_up = detail::read_u32_vector(in, CTX);
    file.cch.up.orig_down = detail::read_u32_vector(in, CTX);
    file.cch.elim.parent = detail::read_u32_vector(in, CTX);
    auto g_first = detail::read_u32_vector(in, CTX);
    auto g_head = detail::read_u32_vector(in, CTX);
    auto g_length = detail::read_u32_vector(in, CTX);
    if (file.cch.up.first.size() != n + 1 || file.cch.elim.parent.size() != n)
        throw ParseError("corrupt CCH file: inconsistent array sizes");
    const EdgeId m = static_cast<EdgeId>(file.cch.up.head.size());
    if (file.cch.up.first.back() != m || file.cch.up.up_weight.size() != m ||
        file.cch.up.down_weight.size() != m || file.cch.up.orig_up.size() != m ||
        file.cch.up.orig_down.size() != m)
        throw ParseError("corrupt CCH file: inconsistent array sizes");
    file.cch.graph = Graph::from_csr(std::move(g_first), std::move(g_head), std::move(g_length));
    if (file.cch.graph.num_vertices() != n)
        throw ParseError("corrupt CCH file: inconsistent array sizes");
    for (Vertex v = 0; v < n; ++v) {
        const Vertex parent = file.cch.elim.parent[v];
        if (parent == INVALID_VERTEX)
            file.cch.elim.root = v;
        else if (parent <= v || parent >= n)
            throw ParseError("corrupt CCH file: invalid elimination tree");
    }
    return file;
}

inline void write_rank_file(std::ostream& out, const std::vector<Vertex>& rank) {
    for (Vertex r : rank) detail::write_u32(out, r);
}

template <typename T>
inline T load_from_file(const std::string& path, T (*reader)(std::istream&)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return reader(in);
}

template <typename T>
inline void save_to_file(const std::string& path, const T& value,
                         void (*writer)(std::ostream&, const T&)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    writer(out, value);
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace cch
