#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"
#include "erwalk/rng.hpp"

namespace erwalk {

enum class CouplingMode {
    Decreasing,              ///< p_{n+1} <= p_n; indicators thinned directly.
    IncreasingViaComplement  ///< p_{n+1} >= p_n; the complement graph is thinned.
};

/// Edge-indicator state of the coupled graph sequence across growing n.
///
/// In decreasing mode the stored indicators are the graph's own edge
/// indicators and an advance retains each present edge with probability
/// p_next / p. In increasing mode the stored indicators belong to the
/// complement graph (present with probability 1 - p), the same thinning is
/// applied to them, and materialization flips. Either way the marginal law
/// at stage n is G(n, p_n) and indicators evolve as a time-inhomogeneous
/// Markov chain: an absent indicator stays absent surely.
///
/// Single-owner mutable; advances must be serialized by the caller.
class CoupledSequence {
public:
    CoupledSequence(int n0, double p0, CouplingMode mode, std::uint64_t seed)
        : n_(n0), p_(p0), mode_(mode), seed_(seed), rng_(seed) {
        if (n0 < 1) throw InvalidSize("initial vertex count must be >= 1");
        if (n0 > kMaxVertices) throw InvalidSize("vertex count exceeds dense cap");
        if (!(p0 > 0.0 && p0 < 1.0))
            throw InvalidProbability("coupled sequences require p in (0,1)");
        const double q = stored_probability(p0);
        ind_.assign(static_cast<std::size_t>(n0) * n0, 0);
        for (int i = 0; i < n0; ++i)
            for (int j = i + 1; j < n0; ++j)
                if (rng_.bernoulli(q)) set(i, j, n0);
    }

    int current_n() const noexcept { return n_; }
    double current_p() const noexcept { return p_; }
    CouplingMode mode() const noexcept { return mode_; }

    /// Raw stored indicator for pair {i, j} (complement indicator in
    /// increasing mode).
    bool indicator(int i, int j) const noexcept {
        return ind_[static_cast<std::size_t>(i) * n_ + j] != 0;
    }

    /// The graph at the current stage.
    GraphSample current_graph() const { return materialize(); }

    /// Grows the sequence to n+1 vertices at edge probability p_next and
    /// returns the new stage's graph. Existing indicators are retained with
    /// probability p_next/p (resp. (1-p_next)/(1-p) on the complement); the
    /// new vertex's n indicators are fresh Bernoulli draws. Draw order is
    /// row-major over surviving pairs, then the new vertex's pairs.
    GraphSample advance(double p_next) {
        if (!(p_next > 0.0 && p_next < 1.0))
            throw InvalidProbability("p_next must lie in (0,1)");
        if (mode_ == CouplingMode::Decreasing && p_next > p_)
            throw MonotonicityViolation("decreasing mode requires p_next <= current p");
        if (mode_ == CouplingMode::IncreasingViaComplement && p_next < p_)
            throw MonotonicityViolation("increasing mode requires p_next >= current p");
        if (n_ + 1 > kMaxVertices) throw InvalidSize("advance exceeds dense cap");

        const double retain = stored_probability(p_next) / stored_probability(p_);
        const double fresh = stored_probability(p_next);
        const int n1 = n_ + 1;
        std::vector<std::uint8_t> next(static_cast<std::size_t>(n1) * n1, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (indicator(i, j) && rng_.bernoulli(retain)) {
                    next[static_cast<std::size_t>(i) * n1 + j] = 1;
                    next[static_cast<std::size_t>(j) * n1 + i] = 1;
                }
        for (int i = 0; i < n_; ++i)
            if (rng_.bernoulli(fresh)) {
                next[static_cast<std::size_t>(i) * n1 + n_] = 1;
                next[static_cast<std::size_t>(n_) * n1 + i] = 1;
            }
        ind_ = std::move(next);
        n_ = n1;
        p_ = p_next;
        return materialize();
    }

private:
    double stored_probability(double p) const noexcept {
        return mode_ == CouplingMode::Decreasing ? p : 1.0 - p;
    }

    void set(int i, int j, int stride) noexcept {
        ind_[static_cast<std::size_t>(i) * stride + j] = 1;
        ind_[static_cast<std::size_t>(j) * stride + i] = 1;
    }

    GraphSample materialize() const {
        const bool flip = mode_ == CouplingMode::IncreasingViaComplement;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (indicator(i, j) != flip) edges.emplace_back(i, j);
        return GraphSample::from_edges(n_, p_, seed_, std::string(kRngId), edges);
    }

    int n_;
    double p_;
    CouplingMode mode_;
    std::uint64_t seed_;
    Rng rng_;
    std::vector<std::uint8_t> ind_;
};

}  // namespace erwalk
