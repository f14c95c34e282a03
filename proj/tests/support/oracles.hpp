#pragma once

// Test-side oracles. Everything here is deliberately independent of the
// library's solver paths: hitting times come from fixed-point iteration on
// the first-step equations, probabilities from lgamma-based exact tails.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "erwalk/graph.hpp"

namespace oracles {

/// Expected hitting times of target j by damped fixed-point iteration of
/// h_i = 1 + sum_k P_ik h_k (h_j = 0). Geometric convergence on connected
/// graphs; no matrix factorization involved.
inline std::vector<double> hitting_times_iterative(const erwalk::GraphSample& g, int j,
                                                   double tol = 1e-13,
                                                   int max_iters = 2000000) {
    const int n = g.n();
    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.adjacency(a, b)) nbr[static_cast<std::size_t>(a)].push_back(b);
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int it = 0; it < max_iters; ++it) {
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            double s = 0.0;
            for (int k : nbr[static_cast<std::size_t>(i)]) s += h[static_cast<std::size_t>(k)];
            const double v = 1.0 + s / static_cast<double>(nbr[static_cast<std::size_t>(i)].size());
            delta = std::max(delta, std::abs(v - h[static_cast<std::size_t>(i)]));
            next[static_cast<std::size_t>(i)] = v;
        }
        h.swap(next);
        if (delta < tol) return h;
    }
    throw std::runtime_error("hitting_times_iterative did not converge");
}

inline double log_binomial_pmf(std::int64_t n, std::int64_t k, double p) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * std::log(p) +
           static_cast<double>(n - k) * std::log1p(-p);
}

/// Exact two-sided binomial test: sums the probability of every outcome no
/// more likely than the observed one.
inline double binomial_two_sided_pvalue(std::int64_t successes, std::int64_t trials, double p) {
    const double log_obs = log_binomial_pmf(trials, successes, p);
    double pval = 0.0;
    for (std::int64_t k = 0; k <= trials; ++k) {
        const double lk = log_binomial_pmf(trials, k, p);
        if (lk <= log_obs + 1e-9) pval += std::exp(lk);
    }
    return std::min(pval, 1.0);
}

/// Reference values of the standard normal CDF, frozen from a 30-digit
/// computation.
struct PhiPoint {
    double x;
    double phi;
};
inline constexpr PhiPoint kPhiTable[] = {
    {0.0, 0.5},
    {1.0, 0.84134474606854294859},
    {-1.0, 0.15865525393145705141},
    {2.0, 0.9772498680518207928},
    {0.5, 0.69146246127401310364},
    {-1.96, 0.024997895148220434137},
    {3.0, 0.99865010196836990547},
};

// -- small named graphs -----------------------------------------------------

inline erwalk::GraphSample complete_graph(int n, double p = 1.0, std::uint64_t seed = 0) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return erwalk::GraphSample::from_edges(n, p, seed, "hand", edges);
}

inline erwalk::GraphSample path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return erwalk::GraphSample::from_edges(n, 0.5, 0, "hand", edges);
}

inline erwalk::GraphSample star_graph(int n) {  // centered at 0
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
    return erwalk::GraphSample::from_edges(n, 0.5, 0, "hand", edges);
}

inline erwalk::GraphSample single_edge() {
    return erwalk::GraphSample::from_edges(2, 0.5, 0, "hand", {{0, 1}});
}

inline erwalk::GraphSample two_disjoint_edges() {
    return erwalk::GraphSample::from_edges(4, 0.5, 0, "hand", {{0, 1}, {2, 3}});
}

}  // namespace oracles
