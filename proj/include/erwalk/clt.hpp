#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"
#include "erwalk/hitting.hpp"
#include "erwalk/spectral.hpp"

namespace erwalk {

/// Standard normal CDF. std::erfc is correctly rounded to well below the
/// 1e-7 absolute error this layer documents.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

namespace detail {

inline void require_open_unit(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw InvalidProbability("statistic requires p in (0,1), got " + std::to_string(p));
}

inline double clt_scale(int n, double p) {  // sqrt(np/(1-p))
    return std::sqrt(static_cast<double>(n) * p / (1.0 - p));
}

}  // namespace detail

/// sqrt(p/(n(1-p))) (H_j - n): the standardized mean target hitting time.
inline double standardized_target_statistic(double h_j, int n, double p) {
    detail::require_open_unit(p);
    if (n < 2) throw InvalidSize("standardized target statistic needs n >= 2");
    return std::sqrt(p / (static_cast<double>(n) * (1.0 - p))) * (h_j - static_cast<double>(n));
}

/// sqrt(C(n-1,2)/(p(1-p))) (|E \ N_j| / C(n-1,2) - p): the Lindeberg-Feller
/// standardization of the excluded-edge count.
inline double standardized_edge_statistic(const GraphSample& g, int j) {
    detail::require_open_unit(g.p());
    if (g.n() < 3) throw InvalidSize("edge statistic needs n >= 3");
    const GraphStatistics st = graph_statistics(g, j);
    const double n1 = static_cast<double>(g.n() - 1);
    const double pairs = n1 * (n1 - 1.0) / 2.0;  // C(n-1, 2)
    const double p = g.p();
    return std::sqrt(pairs / (p * (1.0 - p))) *
           (static_cast<double>(st.excluded_edge_count) / pairs - p);
}

/// sqrt(np/(1-p)) (log(2|E \ N_j|/d_j + 2) - log n): the delta-method
/// transform of the excluded-edge/degree ratio.
inline double standardized_log_statistic(const GraphSample& g, int j) {
    detail::require_open_unit(g.p());
    const GraphStatistics st = graph_statistics(g, j);
    if (st.degree_j == 0) throw IsolatedTarget("target vertex has degree 0");
    const double ratio = 2.0 * static_cast<double>(st.excluded_edge_count) /
                             static_cast<double>(st.degree_j) + 2.0;
    return detail::clt_scale(g.n(), g.p()) * (std::log(ratio) - std::log(g.n()));
}

/// The scaling triple of the two-dimensional delta-method step:
/// r_n = sqrt((n-1)p/(1-p)), T_n = (|E\N_j|/sqrt(C(n-1,2)(n-1)p^2), d_j/((n-1)p)),
/// theta_n = (sqrt((n-2)/2), 1). Exposed for transparency of the transform
/// pipeline.
struct DeltaInputs {
    double r_n;
    std::array<double, 2> t_n;
    std::array<double, 2> theta_n;
};

inline DeltaInputs delta_inputs(const GraphSample& g, int j) {
    detail::require_open_unit(g.p());
    if (g.n() < 3) throw InvalidSize("delta inputs need n >= 3");
    const GraphStatistics st = graph_statistics(g, j);
    const double n = static_cast<double>(g.n());
    const double p = g.p();
    const double pairs = (n - 1.0) * (n - 2.0) / 2.0;  // C(n-1, 2)
    DeltaInputs d;
    d.r_n = std::sqrt((n - 1.0) * p / (1.0 - p));
    d.t_n = {static_cast<double>(st.excluded_edge_count) /
                 std::sqrt(pairs * (n - 1.0) * p * p),
             static_cast<double>(st.degree_j) / ((n - 1.0) * p)};
    d.theta_n = {std::sqrt((n - 2.0) / 2.0), 1.0};
    return d;
}

/// The vanishing terms of the spectral-sum analysis, each on the CLT scale
/// sqrt(np/(1-p)), plus the p * sum_{k>=2} lambda_k^2 diagnostic whose
/// leading order is governed by trace(B^2) ~ 1/p.
struct NegligibilityDiagnostics {
    double pi_term;        // scale * pi_j
    double z_term;         // scale * Z_n
    double log_sum_term;   // scale * log(S_j)
    double lambda_sq_term; // p * sum_{k>=2} lambda_k^2
};

inline NegligibilityDiagnostics negligibility_diagnostics(const SpectralDecomposition& dec,
                                                          const GraphSample& g, int j) {
    detail::require_open_unit(g.p());
    const SumDecomposition sd = sum_decomposition(dec, g, j);  // checks the gap
    const double scale = detail::clt_scale(g.n(), g.p());
    double lambda_sq = 0.0;
    for (int k = 1; k < dec.n(); ++k) lambda_sq += dec.eigenvalues(k) * dec.eigenvalues(k);
    return {scale * sd.pi_j, scale * sd.z_n, scale * std::log(sd.spectral_sum),
            g.p() * lambda_sq};
}

/// sup_x |F_empirical(x) - Phi(x)| against the standard normal.
inline double ks_distance_to_normal(std::span<const double> samples) {
    if (samples.empty()) throw InsufficientSamples("KS distance needs at least one sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double phi = normal_cdf(xs[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - phi));
        d = std::max(d, std::abs(static_cast<double>(i) / n - phi));
    }
    return d;
}

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; NaN when count < 2
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_distance = 0.0;
};

inline SummaryStats summary_stats(std::span<const double> samples) {
    if (samples.empty()) throw InsufficientSamples("summary needs at least one sample");
    SummaryStats s;
    s.count = samples.size();
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) sum += x;
    s.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    if (samples.size() >= 2) {
        s.variance = m2 / (n - 1.0);
        m2 /= n;
        m3 /= n;
        m4 /= n;
        if (m2 > 0.0) {
            s.skewness = m3 / std::pow(m2, 1.5);
            s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        } else {
            s.skewness = 0.0;
            s.excess_kurtosis = 0.0;
        }
    } else {
        s.variance = std::numeric_limits<double>::quiet_NaN();
        s.skewness = std::numeric_limits<double>::quiet_NaN();
        s.excess_kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    s.ks_distance = ks_distance_to_normal(samples);
    return s;
}

}  // namespace erwalk
