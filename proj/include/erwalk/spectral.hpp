#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"

namespace erwalk {

/// Tolerances of the spectral layer. Chosen so double-precision rounding
/// dominates model error up to n = 5000.
inline constexpr double kResidualTolPerN = 1e-9;    // residual <= 1e-9 * n
inline constexpr double kTopEigenvalueTol = 1e-10;  // |lambda_1 - 1|
inline constexpr double kDegenerateTol = 1e-12;     // eigenvalue cluster width
inline constexpr double kNearDisconnectedGap = 1e-8;  // refuse if 1 - lambda_2 below

/// B = D^{-1/2} A D^{-1/2}: symmetric, zero diagonal, spectrum in [-1, 1].
struct NormalizedAdjacency {
    Eigen::MatrixXd m;

    int n() const noexcept { return static_cast<int>(m.rows()); }
};

inline NormalizedAdjacency build_normalized_adjacency(const GraphSample& g) {
    const int n = g.n();
    std::vector<double> inv_sqrt_d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int d = g.degree(i);
        if (d == 0) throw IsolatedVertex("vertex " + std::to_string(i) + " has degree 0");
        inv_sqrt_d[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(static_cast<double>(d));
    }
    NormalizedAdjacency B;
    B.m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (g.adjacency(i, j)) {
                const double v = inv_sqrt_d[static_cast<std::size_t>(i)] *
                                 inv_sqrt_d[static_cast<std::size_t>(j)];
                B.m(i, j) = v;
                B.m(j, i) = v;
            }
        }
    }
    return B;
}

/// Full symmetric eigendecomposition of B, eigenvalues descending,
/// eigenvectors orthonormal columns aligned with them.
///
/// Canonical form: each eigenvector's first component of magnitude above
/// 1e-12 is positive; within an eigenvalue cluster of width <= 1e-12 the
/// columns are additionally sorted lexicographically, which pins a unique
/// representative for hand-crafted degenerate spectra (ER spectra are almost
/// surely simple).
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // lambda_1 >= ... >= lambda_n
    Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues[k]
    double residual = 0.0;         // max_k ||B v_k - lambda_k v_k||_inf
    bool degenerate = false;       // some cluster had width <= kDegenerateTol

    int n() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    for (Eigen::Index r = 0; r < v.size(); ++r) {
        if (std::abs(v(r)) > 1e-12) {
            if (v(r) < 0.0) v = -v;
            return;
        }
    }
}

inline bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index r = 0; r < a.size(); ++r) {
        if (a(r) < b(r)) return true;
        if (a(r) > b(r)) return false;
    }
    return false;
}

}  // namespace detail

inline SpectralDecomposition eigendecompose(const NormalizedAdjacency& B) {
    const int n = B.n();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B.m);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("symmetric eigensolver did not converge");

    SpectralDecomposition dec;
    dec.eigenvalues = solver.eigenvalues().reverse();
    dec.eigenvectors = solver.eigenvectors().rowwise().reverse();

    for (int k = 0; k < n; ++k) detail::fix_sign(dec.eigenvectors.col(k));

    // Canonicalize degenerate clusters.
    int k = 0;
    while (k < n) {
        int end = k + 1;
        while (end < n &&
               std::abs(dec.eigenvalues(end - 1) - dec.eigenvalues(end)) <= kDegenerateTol)
            ++end;
        if (end - k > 1) {
            dec.degenerate = true;
            std::vector<int> order(static_cast<std::size_t>(end - k));
            std::iota(order.begin(), order.end(), k);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return detail::lex_less(dec.eigenvectors.col(a), dec.eigenvectors.col(b));
            });
            Eigen::MatrixXd block(n, end - k);
            for (int c = 0; c < end - k; ++c)
                block.col(c) = dec.eigenvectors.col(order[static_cast<std::size_t>(c)]);
            dec.eigenvectors.middleCols(k, end - k) = block;
        }
        k = end;
    }

    // Residual certificate: one dense product covers every eigenpair.
    Eigen::MatrixXd R = B.m * dec.eigenvectors -
                        dec.eigenvectors * dec.eigenvalues.asDiagonal();
    dec.residual = R.cwiseAbs().maxCoeff();
    if (dec.residual > kResidualTolPerN * n)
        throw ConvergenceFailure("eigenpair residual " + std::to_string(dec.residual) +
                                 " exceeds tolerance");
    if (std::abs(dec.eigenvalues(0) - 1.0) > kTopEigenvalueTol)
        throw ConvergenceFailure("top eigenvalue " + std::to_string(dec.eigenvalues(0)) +
                                 " deviates from 1; input disconnected or corrupted");
    if (dec.eigenvalues.cwiseAbs().maxCoeff() > 1.0 + kTopEigenvalueTol)
        throw ConvergenceFailure("eigenvalue outside [-1, 1]");
    return dec;
}

/// Residuals of the three per-vertex spectral identities at vertex j:
/// the orthonormal-basis identity sum_k v_{kj}^2 = 1, the zero-diagonal
/// moment sum_k lambda_k v_{kj}^2 = b_jj = 0, and v_{1j}^2 = pi_j.
struct SpectralIdentityReport {
    double basis_residual;
    double moment_residual;
    double pi_residual;
};

inline SpectralIdentityReport verify_spectral_identities(const SpectralDecomposition& dec,
                                                         const GraphSample& g, int j) {
    if (j < 0 || j >= g.n()) throw IndexOutOfRange("vertex index out of range");
    const StationaryDistribution pi = stationary_distribution(g);
    double basis = 0.0, moment = 0.0;
    for (int k = 0; k < dec.n(); ++k) {
        const double vkj = dec.eigenvectors(j, k);
        basis += vkj * vkj;
        moment += dec.eigenvalues(k) * vkj * vkj;
    }
    const double v1j = dec.eigenvectors(j, 0);
    return {std::abs(basis - 1.0), std::abs(moment),
            std::abs(v1j * v1j - pi.pi[static_cast<std::size_t>(j)])};
}

/// max_{k>=2} |lambda_k| and its ratio to the 2/sqrt(np) spectral-gap
/// envelope (ratio <= 1 + o(1) in the connectivity regime).
struct SpectralGapStatistic {
    double max_abs_nontrivial;
    double normalized_ratio;
};

inline SpectralGapStatistic spectral_gap_statistic(const SpectralDecomposition& dec, int n,
                                                   double p) {
    if (n < 2) throw InvalidSize("spectral gap statistic needs n >= 2");
    double m = 0.0;
    for (int k = 1; k < dec.n(); ++k) m = std::max(m, std::abs(dec.eigenvalues(k)));
    return {m, m * std::sqrt(static_cast<double>(n) * p) / 2.0};
}

/// max_{k>=2} ||v_k||_inf^2 and its ratio to sqrt(p/n); the delocalization
/// conjecture asserts the ratio vanishes as n grows. Basis-dependent inside
/// degenerate eigenspaces, hence the flag.
struct DelocalizationStatistic {
    double max_inf_norm_sq;
    double conjecture_ratio;
    bool degenerate;
};

inline DelocalizationStatistic delocalization_statistic(const SpectralDecomposition& dec, int n,
                                                        double p) {
    if (n < 2) throw InvalidSize("delocalization statistic needs n >= 2");
    double m = 0.0;
    for (int k = 1; k < dec.n(); ++k) {
        const double a = dec.eigenvectors.col(k).cwiseAbs().maxCoeff();
        m = std::max(m, a * a);
    }
    return {m, m / std::sqrt(p / static_cast<double>(n)), dec.degenerate};
}

/// sum_k lambda_k^2 without the decomposition: trace(B^2) = sum_{i!=j} b_ij^2.
inline double trace_square(const NormalizedAdjacency& B) { return B.m.squaredNorm(); }

}  // namespace erwalk
