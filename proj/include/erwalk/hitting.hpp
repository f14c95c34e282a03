#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"
#include "erwalk/rng.hpp"
#include "erwalk/spectral.hpp"

namespace erwalk {

inline constexpr std::uint64_t kWalkStepCap = 1000000000;  // per-trial abort threshold

namespace detail {

/// In-place partial-pivot LU solve of the row-major system a x = b.
/// Deliberately self-contained: this backs the linear-solve oracle, which
/// must stay independent of the eigensolver path it cross-checks.
inline bool lu_solve_inplace(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double m = std::abs(a[static_cast<std::size_t>(i) * n + k]);
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best < 1e-300) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(k) * n + j],
                          a[static_cast<std::size_t>(piv) * n + j]);
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        }
        const double inv_pivot = 1.0 / a[static_cast<std::size_t>(k) * n + k];
        const double* row_k = a.data() + static_cast<std::size_t>(k) * n;
        for (int i = k + 1; i < n; ++i) {
            double* row_i = a.data() + static_cast<std::size_t>(i) * n;
            const double f = row_i[k] * inv_pivot;
            if (f == 0.0) continue;
            row_i[k] = 0.0;
            for (int j = k + 1; j < n; ++j) row_i[j] -= f * row_k[j];
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        const double* row_i = a.data() + static_cast<std::size_t>(i) * n;
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= row_i[j] * b[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)] = s / row_i[i];
    }
    return true;
}

inline void require_gap(const SpectralDecomposition& dec) {
    if (dec.n() >= 2 && 1.0 - dec.eigenvalues(1) < kNearDisconnectedGap)
        throw NearDisconnected("1 - lambda_2 = " + std::to_string(1.0 - dec.eigenvalues(1)) +
                               " below gap threshold");
}

}  // namespace detail

/// H_ij by the spectral representation
///   H_ij = 2|E| sum_{k>=2} (1 - lambda_k)^{-1} (v_{kj}^2/d_j - v_{ki} v_{kj}/sqrt(d_i d_j)).
/// Basis- and sign-invariant within eigenspaces.
inline double hitting_time_spectral(const SpectralDecomposition& dec, const GraphSample& g,
                                    int i, int j) {
    if (i < 0 || i >= g.n() || j < 0 || j >= g.n())
        throw IndexOutOfRange("vertex index out of range");
    if (i == j) throw SameVertex("hitting_time_spectral requires i != j");
    detail::require_gap(dec);
    const double twice_edges = 2.0 * static_cast<double>(g.edge_count());
    const double dj = static_cast<double>(g.degree(j));
    const double inv_sq = 1.0 / std::sqrt(static_cast<double>(g.degree(i)) * dj);
    double sum = 0.0;
    for (int k = 1; k < dec.n(); ++k) {
        const double vkj = dec.eigenvectors(j, k);
        const double vki = dec.eigenvectors(i, k);
        sum += (vkj * vkj / dj - vki * vkj * inv_sq) / (1.0 - dec.eigenvalues(k));
    }
    return twice_edges * sum;
}

/// Full column H_.j of the spectral formula; H_jj = 0 by convention.
inline std::vector<double> hitting_column_spectral(const SpectralDecomposition& dec,
                                                   const GraphSample& g, int j) {
    std::vector<double> out(static_cast<std::size_t>(g.n()), 0.0);
    for (int i = 0; i < g.n(); ++i)
        if (i != j) out[static_cast<std::size_t>(i)] = hitting_time_spectral(dec, g, i, j);
    return out;
}

/// The Eq-style split of the spectral sum S_j = sum_{k>=2} v_{kj}^2/(1-lambda_k)
/// into 1 - 2 pi_j + Z_n with Z_n = sum_{k>=2} lambda_k^2 v_{kj}^2/(1-lambda_k).
struct SumDecomposition {
    double spectral_sum;  // S_j
    double pi_j;
    double z_n;
};

inline SumDecomposition sum_decomposition(const SpectralDecomposition& dec, const GraphSample& g,
                                          int j) {
    if (j < 0 || j >= g.n()) throw IndexOutOfRange("vertex index out of range");
    detail::require_gap(dec);
    double s = 0.0, z = 0.0;
    for (int k = 1; k < dec.n(); ++k) {
        const double vkj = dec.eigenvectors(j, k);
        const double lam = dec.eigenvalues(k);
        const double w = vkj * vkj / (1.0 - lam);
        s += w;
        z += lam * lam * w;
    }
    const double pi_j = static_cast<double>(g.degree(j)) /
                        (2.0 * static_cast<double>(g.edge_count()));
    return {s, pi_j, z};
}

/// Per-target hitting profile around the spectral representation
/// H_j = (2|E|/d_j) S_j.
struct HittingProfile {
    int target_j = 0;
    std::vector<double> H_column;  // filled only when requested
    double H_j = 0.0;
    double spectral_sum = 0.0;  // S_j
    double pi_j = 0.0;
    double Z_n = 0.0;
};

inline HittingProfile mean_target_hitting_spectral(const SpectralDecomposition& dec,
                                                   const GraphSample& g, int j,
                                                   bool with_column = false) {
    const SumDecomposition sd = sum_decomposition(dec, g, j);
    HittingProfile prof;
    prof.target_j = j;
    prof.spectral_sum = sd.spectral_sum;
    prof.pi_j = sd.pi_j;
    prof.Z_n = sd.z_n;
    prof.H_j = 2.0 * static_cast<double>(g.edge_count()) /
               static_cast<double>(g.degree(j)) * sd.spectral_sum;
    if (with_column) prof.H_column = hitting_column_spectral(dec, g, j);
    return prof;
}

/// Independent oracle: first-step analysis. Solves the absorbing system
/// h_i = 1 + sum_{k != j} P_ik h_k (i != j), h_j = 0, by dense partial-pivot
/// LU. No spectral machinery involved.
inline std::vector<double> hitting_times_solve(const GraphSample& g, int j) {
    const int n = g.n();
    if (j < 0 || j >= n) throw IndexOutOfRange("vertex index out of range");
    if (!is_connected(g)) throw NotConnected("hitting times need a connected graph");
    if (n == 1) return {0.0};

    const int m = n - 1;
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), 1.0);
    auto reduced = [j](int v) { return v < j ? v : v - 1; };
    for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const int ri = reduced(i);
        double* row = a.data() + static_cast<std::size_t>(ri) * m;
        const double inv_d = 1.0 / static_cast<double>(g.degree(i));
        const std::uint64_t* bits = g.row(i);
        for (std::size_t w = 0; w < g.words_per_row(); ++w) {
            std::uint64_t word = bits[w];
            while (word) {
                const int k = static_cast<int>(w * 64) + __builtin_ctzll(word);
                word &= word - 1;
                if (k != j) row[reduced(k)] -= inv_d;
            }
        }
        row[ri] += 1.0;
    }
    if (!detail::lu_solve_inplace(a, b, m))
        throw SingularSystem("absorbing system is singular; internal fault");

    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        if (i != j) h[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(reduced(i))];
    return h;
}

/// All-targets hitting matrix via n independent solves; columns[j][i] = H_ij.
/// O(n^4) worst case, intended for n up to a few hundred.
inline std::vector<std::vector<double>> hitting_matrix_solve(const GraphSample& g) {
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(g.n()));
    for (int j = 0; j < g.n(); ++j) columns[static_cast<std::size_t>(j)] = hitting_times_solve(g, j);
    return columns;
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
};

namespace detail {

inline std::uint64_t walk_until_hit(const NeighborLists& nl, int start, int target, Rng& rng) {
    std::uint64_t steps = 0;
    int v = start;
    while (v != target) {
        if (++steps > kWalkStepCap)
            throw StepCapExceeded("walk exceeded " + std::to_string(kWalkStepCap) + " steps");
        const int d = nl.degree_of(v);
        v = nl.begin_of(v)[rng.below(static_cast<std::uint64_t>(d))];
    }
    return steps;
}

inline McEstimate summarize_trials(const std::vector<double>& steps) {
    McEstimate est;
    est.trials = static_cast<std::int64_t>(steps.size());
    double sum = 0.0;
    for (double s : steps) sum += s;
    est.mean = sum / static_cast<double>(steps.size());
    if (steps.size() > 1) {
        double ss = 0.0;
        for (double s : steps) ss += (s - est.mean) * (s - est.mean);
        const double var = ss / static_cast<double>(steps.size() - 1);
        est.std_error = std::sqrt(var / static_cast<double>(steps.size()));
    }
    return est;
}

}  // namespace detail

/// Second independent oracle: simulate the walk. Per-trial seeds derive from
/// (seed, trial index), so the estimate is schedule-invariant.
inline McEstimate hitting_time_mc(const GraphSample& g, int i, int j, std::int64_t trials,
                                  std::uint64_t seed) {
    if (i < 0 || i >= g.n() || j < 0 || j >= g.n())
        throw IndexOutOfRange("vertex index out of range");
    if (i == j) throw SameVertex("hitting_time_mc requires i != j");
    if (trials < 1) throw InvalidSize("trials must be >= 1");
    if (!is_connected(g)) throw NotConnected("hitting times need a connected graph");
    const NeighborLists nl = neighbor_lists(g);
    std::vector<double> steps(static_cast<std::size_t>(trials));
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        steps[static_cast<std::size_t>(t)] =
            static_cast<double>(detail::walk_until_hit(nl, i, j, rng));
    }
    return detail::summarize_trials(steps);
}

/// Monte Carlo estimate of H_j itself: start each trial from the stationary
/// law (H_jj = 0 contributes when the start is j).
inline McEstimate mean_target_hitting_mc(const GraphSample& g, int j, std::int64_t trials,
                                         std::uint64_t seed) {
    if (j < 0 || j >= g.n()) throw IndexOutOfRange("vertex index out of range");
    if (trials < 1) throw InvalidSize("trials must be >= 1");
    if (!is_connected(g)) throw NotConnected("hitting times need a connected graph");
    const NeighborLists nl = neighbor_lists(g);
    const StationaryDistribution pi = stationary_distribution(g);
    std::vector<double> cdf(pi.pi.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pi.pi.size(); ++k) {
        acc += pi.pi[k];
        cdf[k] = acc;
    }
    cdf.back() = 1.0;
    std::vector<double> steps(static_cast<std::size_t>(trials));
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const double u = rng.uniform01();
        const int start = static_cast<int>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        steps[static_cast<std::size_t>(t)] =
            start == j ? 0.0 : static_cast<double>(detail::walk_until_hit(nl, start, j, rng));
    }
    return detail::summarize_trials(steps);
}

/// pi-weighted aggregates of a full hitting matrix: H_j = sum_i pi_i H_ij and
/// H^i = sum_j pi_j H_ij. Input columns[j][i] = H_ij.
struct HittingAggregates {
    std::vector<double> mean_target;    // H_j per target j
    std::vector<double> mean_starting;  // H^i per start i
};

inline HittingAggregates mean_hitting_aggregates(const GraphSample& g,
                                                 const std::vector<std::vector<double>>& columns) {
    const std::size_t n = static_cast<std::size_t>(g.n());
    if (columns.size() != n) throw DimensionMismatch("expected one column per target");
    for (const auto& c : columns)
        if (c.size() != n) throw DimensionMismatch("column length differs from vertex count");
    const StationaryDistribution pi = stationary_distribution(g);
    HittingAggregates out;
    out.mean_target.assign(n, 0.0);
    out.mean_starting.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double hj = 0.0;
        for (std::size_t i = 0; i < n; ++i) hj += pi.pi[i] * columns[j][i];
        out.mean_target[j] = hj;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double hi = 0.0;
        for (std::size_t j = 0; j < n; ++j) hi += pi.pi[j] * columns[j][i];
        out.mean_starting[i] = hi;
    }
    return out;
}

}  // namespace erwalk
