#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"

namespace erwalk::io {

/// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ParseError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path edges_path(const std::filesystem::path& prefix) {
    std::filesystem::path p = prefix;
    p += ".edges.csv";
    return p;
}

inline std::filesystem::path meta_path(const std::filesystem::path& prefix) {
    std::filesystem::path p = prefix;
    p += ".meta.json";
    return p;
}

/// Writes <prefix>.edges.csv (header `i,j`, one row per edge with i < j) and
/// <prefix>.meta.json (n, p, seed, rng_id). The pair round-trips bit-exactly.
inline void write_graph(const GraphSample& g, const std::filesystem::path& prefix) {
    std::string csv = "i,j\n";
    for (auto [i, j] : g.edges()) {
        csv += std::to_string(i);
        csv += ',';
        csv += std::to_string(j);
        csv += '\n';
    }
    nlohmann::json meta{{"schema", 1},
                        {"n", g.n()},
                        {"p", g.p()},
                        {"seed", g.seed()},
                        {"rng_id", g.rng_id()}};
    atomic_write_file(edges_path(prefix), csv);
    atomic_write_file(meta_path(prefix), meta.dump(2) + "\n");
}

namespace detail {

inline int parse_vertex(const std::string& tok, int line_no) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad vertex '" + tok + "'");
    return v;
}

}  // namespace detail

/// Reads the <prefix>.edges.csv / <prefix>.meta.json pair back into a sample.
inline GraphSample read_graph(const std::filesystem::path& prefix) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(meta_path(prefix)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("metadata: " + std::string(e.what()));
    }
    if (!meta.contains("n") || !meta.contains("p") || !meta.contains("seed") ||
        !meta.contains("rng_id"))
        throw ParseError("metadata missing one of n, p, seed, rng_id");
    const int n = meta.at("n").get<int>();
    const double p = meta.at("p").get<double>();
    const std::uint64_t seed = meta.at("seed").get<std::uint64_t>();
    const std::string rng_id = meta.at("rng_id").get<std::string>();

    std::istringstream in(read_file(edges_path(prefix)));
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line) || line != "i,j")
        throw ParseError("line 1: expected header 'i,j'");
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<std::int64_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty row");
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'i,j'");
        const int i = detail::parse_vertex(line.substr(0, comma), line_no);
        const int j = detail::parse_vertex(line.substr(comma + 1), line_no);
        if (i >= j)
            throw ParseError("line " + std::to_string(line_no) + ": rows must satisfy i < j");
        if (j >= n)
            throw ParseError("line " + std::to_string(line_no) + ": vertex out of range");
        if (!seen.insert(static_cast<std::int64_t>(i) * n + j).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate edge");
        edges.emplace_back(i, j);
    }
    return GraphSample::from_edges(n, p, seed, rng_id, edges);
}

}  // namespace erwalk::io
