#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "erwalk/error.hpp"
#include "erwalk/rng.hpp"

namespace erwalk {

/// Hard cap on the dense bit-addressable representation.
inline constexpr int kMaxVertices = 5000;

/// One realization of G(n, p): a symmetric, loop-free adjacency structure
/// plus the metadata needed to regenerate it. Immutable after construction
/// and safe to share across threads.
class GraphSample {
public:
    /// Samples G(n, p). Each unordered pair {i, j}, i < j, is included
    /// independently with probability p; bits are drawn in row-major pair
    /// order so the result is reproducible across platforms.
    static GraphSample sample(int n, double p, std::uint64_t seed) {
        if (n < 1) throw InvalidSize("vertex count must be >= 1, got " + std::to_string(n));
        if (n > kMaxVertices)
            throw InvalidSize("vertex count exceeds dense cap " + std::to_string(kMaxVertices));
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidProbability("edge probability must lie in [0,1], got " + std::to_string(p));
        GraphSample g(n, p, seed, std::string(kRngId));
        Rng rng(seed);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) g.set_edge(i, j);
        g.finalize();
        return g;
    }

    /// Builds a sample from an explicit edge list (file loads, hand-made test
    /// graphs). Metadata fields are taken as given.
    static GraphSample from_edges(int n, double p, std::uint64_t seed, std::string rng_id,
                                  const std::vector<std::pair<int, int>>& edges) {
        if (n < 1) throw InvalidSize("vertex count must be >= 1, got " + std::to_string(n));
        if (n > kMaxVertices)
            throw InvalidSize("vertex count exceeds dense cap " + std::to_string(kMaxVertices));
        GraphSample g(n, p, seed, std::move(rng_id));
        for (auto [i, j] : edges) {
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw IndexOutOfRange("edge endpoint out of range");
            if (i == j) throw ParseError("self-loop on vertex " + std::to_string(i));
            if (g.adjacency(i, j)) throw ParseError("duplicate edge {" + std::to_string(i) + "," +
                                                    std::to_string(j) + "}");
            g.set_edge(i, j);
        }
        g.finalize();
        return g;
    }

    int n() const noexcept { return n_; }
    double p() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& rng_id() const noexcept { return rng_id_; }

    bool adjacency(int i, int j) const noexcept {
        return (bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1u;
    }

    int degree(int i) const noexcept { return degrees_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& degrees() const noexcept { return degrees_; }
    std::int64_t edge_count() const noexcept { return edge_count_; }

    /// Row i as packed 64-bit words (n bits used).
    const std::uint64_t* row(int i) const noexcept {
        return bits_.data() + static_cast<std::size_t>(i) * words_;
    }
    std::size_t words_per_row() const noexcept { return words_; }

    /// Edges as (i, j) with i < j, row-major order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<std::size_t>(edge_count_));
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (adjacency(i, j)) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const GraphSample& other) const noexcept {
        return n_ == other.n_ && bits_ == other.bits_;
    }

private:
    GraphSample(int n, double p, std::uint64_t seed, std::string rng_id)
        : n_(n), p_(p), seed_(seed), rng_id_(std::move(rng_id)),
          words_(static_cast<std::size_t>((n + 63) / 64)),
          bits_(static_cast<std::size_t>(n) * words_, 0) {}

    void set_edge(int i, int j) noexcept {
        bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
        bits_[static_cast<std::size_t>(j) * words_ + (i >> 6)] |= std::uint64_t{1} << (i & 63);
    }

    void finalize() {
        degrees_.assign(static_cast<std::size_t>(n_), 0);
        std::int64_t twice_edges = 0;
        for (int i = 0; i < n_; ++i) {
            int d = 0;
            const std::uint64_t* r = row(i);
            for (std::size_t w = 0; w < words_; ++w) d += __builtin_popcountll(r[w]);
            degrees_[static_cast<std::size_t>(i)] = d;
            twice_edges += d;
        }
        edge_count_ = twice_edges / 2;
    }

    int n_;
    double p_;
    std::uint64_t seed_;
    std::string rng_id_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degrees_;
    std::int64_t edge_count_ = 0;

    friend class CoupledSequence;
};

inline GraphSample sample_er_graph(int n, double p, std::uint64_t seed) {
    return GraphSample::sample(n, p, seed);
}

struct GraphStatistics {
    std::int64_t edge_count;
    int degree_j;
    std::int64_t excluded_edge_count;  // |E \ N_j| = |E| - d_j
};

inline GraphStatistics graph_statistics(const GraphSample& g, int j) {
    if (j < 0 || j >= g.n())
        throw IndexOutOfRange("vertex " + std::to_string(j) + " not in [0, " +
                              std::to_string(g.n()) + ")");
    const int dj = g.degree(j);
    return {g.edge_count(), dj, g.edge_count() - dj};
}

struct StationaryDistribution {
    std::vector<double> pi;  // pi[i] = d_i / (2|E|)
};

inline StationaryDistribution stationary_distribution(const GraphSample& g) {
    const double twice_edges = 2.0 * static_cast<double>(g.edge_count());
    StationaryDistribution out;
    out.pi.resize(static_cast<std::size_t>(g.n()));
    for (int i = 0; i < g.n(); ++i) {
        const int d = g.degree(i);
        if (d == 0) throw IsolatedVertex("vertex " + std::to_string(i) + " has degree 0");
        out.pi[static_cast<std::size_t>(i)] = static_cast<double>(d) / twice_edges;
    }
    return out;
}

/// Breadth-first reachability from vertex 0 over packed adjacency rows.
inline bool is_connected(const GraphSample& g) {
    const int n = g.n();
    if (n == 1) return true;
    const std::size_t words = g.words_per_row();
    std::vector<std::uint64_t> visited(words, 0), frontier(words, 0);
    visited[0] = frontier[0] = 1u;
    int reached = 1;
    while (true) {
        std::vector<std::uint64_t> next(words, 0);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t f = frontier[w];
            while (f) {
                const int v = static_cast<int>(w * 64) + __builtin_ctzll(f);
                f &= f - 1;
                const std::uint64_t* r = g.row(v);
                for (std::size_t u = 0; u < words; ++u) next[u] |= r[u];
            }
        }
        int grown = 0;
        for (std::size_t w = 0; w < words; ++w) {
            next[w] &= ~visited[w];
            visited[w] |= next[w];
            grown += __builtin_popcountll(next[w]);
        }
        if (grown == 0) break;
        reached += grown;
        frontier.swap(next);
    }
    return reached == n;
}

/// Adjacency rows as flat CSR-style neighbor lists; precomputed once per
/// graph by the walk simulators so each step is O(1).
struct NeighborLists {
    std::vector<std::int32_t> flat;
    std::vector<std::int64_t> offset;  // size n+1

    const std::int32_t* begin_of(int v) const noexcept {
        return flat.data() + offset[static_cast<std::size_t>(v)];
    }
    int degree_of(int v) const noexcept {
        return static_cast<int>(offset[static_cast<std::size_t>(v) + 1] -
                                offset[static_cast<std::size_t>(v)]);
    }
};

inline NeighborLists neighbor_lists(const GraphSample& g) {
    NeighborLists nl;
    nl.offset.resize(static_cast<std::size_t>(g.n()) + 1);
    nl.offset[0] = 0;
    for (int i = 0; i < g.n(); ++i)
        nl.offset[static_cast<std::size_t>(i) + 1] =
            nl.offset[static_cast<std::size_t>(i)] + g.degree(i);
    nl.flat.resize(static_cast<std::size_t>(2 * g.edge_count()));
    for (int i = 0; i < g.n(); ++i) {
        std::int64_t pos = nl.offset[static_cast<std::size_t>(i)];
        const std::uint64_t* r = g.row(i);
        for (std::size_t w = 0; w < g.words_per_row(); ++w) {
            std::uint64_t bits = r[w];
            while (bits) {
                nl.flat[static_cast<std::size_t>(pos++)] =
                    static_cast<std::int32_t>(w * 64) + __builtin_ctzll(bits);
                bits &= bits - 1;
            }
        }
    }
    return nl;
}

}  // namespace erwalk
