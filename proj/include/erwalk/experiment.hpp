#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "erwalk/clt.hpp"
#include "erwalk/error.hpp"
#include "erwalk/graph.hpp"
#include "erwalk/hitting.hpp"
#include "erwalk/io.hpp"
#include "erwalk/rng.hpp"
#include "erwalk/spectral.hpp"

namespace erwalk {

enum class HjMethod { Auto, Solve, Spectral };
enum class StatKind { Target, Edge, Log, Diagnostics };

/// Auto rule: one dense solve is far cheaper than a full decomposition, so
/// large n defaults to the solve path.
inline constexpr int kAutoSpectralMaxN = 500;

/// Attempts per replication before it is dropped as unconnectable.
inline constexpr int kMaxSampleAttempts = 8;

struct PRule {
    enum class Kind { Constant, CLogN } kind = Kind::Constant;
    double value = 0.2;  // p for Constant, c for CLogN

    double realize(int n) const {
        const double p = kind == Kind::Constant
                             ? value
                             : value * std::log(static_cast<double>(n)) / static_cast<double>(n);
        if (!(p > 0.0 && p < 1.0))
            throw InvalidProbability("p-rule yields p = " + std::to_string(p) + " at n = " +
                                     std::to_string(n));
        return p;
    }
};

struct ExperimentConfig {
    std::vector<int> n_grid;
    PRule p_rule;
    int target = 0;
    int replications = 1;
    std::uint64_t master_seed = 0;
    HjMethod method = HjMethod::Auto;
    std::vector<StatKind> statistics = {StatKind::Target};

    void validate() const {
        if (n_grid.empty()) throw InvalidSize("n_grid must be non-empty");
        if (replications < 1) throw InvalidSize("replications must be >= 1");
        if (p_rule.kind == PRule::Kind::CLogN && p_rule.value < 2.0)
            throw InvalidProbability("c log n / n rule requires c >= 2");
        if (statistics.empty()) throw InvalidSize("statistics must be non-empty");
        for (int n : n_grid) {
            if (n < 3) throw InvalidSize("experiment grid requires n >= 3");
            if (target < 0 || target >= n)
                throw IndexOutOfRange("target vertex not present at n = " + std::to_string(n));
            p_rule.realize(n);  // throws when the realized p leaves (0,1)
        }
    }
};

struct StandardizedSample {
    int n;
    double p;
    int rep;
    std::string statistic;
    double value;
};

struct StatisticSummary {
    int n;
    double p;
    std::string statistic;
    SummaryStats stats;
};

struct DiagnosticsSummary {
    int n;
    std::string statistic;
    std::size_t count;
    double median_abs;
    double mean;
};

struct RejectionRecord {
    int n;
    std::int64_t rejected_draws;        // disconnected samples that were redrawn
    int dropped_replications;           // replications with no connected sample
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string rng_id;
    std::vector<StandardizedSample> samples;  // deterministic (n, rep, statistic) order
    std::vector<StatisticSummary> summaries;  // target/edge/log kinds
    std::vector<DiagnosticsSummary> diagnostics;
    std::vector<RejectionRecord> rejections;
    double runtime_seconds = 0.0;
    int workers = 1;
};

namespace detail {

inline const char* stat_kind_name(StatKind k) {
    switch (k) {
        case StatKind::Target: return "target";
        case StatKind::Edge: return "edge";
        case StatKind::Log: return "log";
        case StatKind::Diagnostics: return "diagnostics";
    }
    return "?";
}

inline const char* method_name(HjMethod m) {
    switch (m) {
        case HjMethod::Auto: return "auto";
        case HjMethod::Solve: return "solve";
        case HjMethod::Spectral: return "spectral";
    }
    return "?";
}

struct ReplicationResult {
    std::vector<std::pair<const char*, double>> values;
    int rejected = 0;
    bool dropped = false;
};

inline ReplicationResult run_replication(const ExperimentConfig& cfg, int n, double p, int rep) {
    ReplicationResult res;
    std::optional<GraphSample> sample;
    for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
        const std::uint64_t seed =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(attempt));
        GraphSample cand = GraphSample::sample(n, p, seed);
        if (is_connected(cand)) {
            sample.emplace(std::move(cand));
            break;
        }
        ++res.rejected;
    }
    if (!sample) {
        res.dropped = true;
        return res;
    }
    const GraphSample& g = *sample;

    const bool wants_diag =
        std::find(cfg.statistics.begin(), cfg.statistics.end(), StatKind::Diagnostics) !=
        cfg.statistics.end();
    const bool spectral_hj =
        cfg.method == HjMethod::Spectral ||
        (cfg.method == HjMethod::Auto && n <= kAutoSpectralMaxN);
    const bool wants_target =
        std::find(cfg.statistics.begin(), cfg.statistics.end(), StatKind::Target) !=
        cfg.statistics.end();

    SpectralDecomposition dec;
    if (wants_diag || (wants_target && spectral_hj))
        dec = eigendecompose(build_normalized_adjacency(g));

    for (StatKind kind : cfg.statistics) {
        switch (kind) {
            case StatKind::Target: {
                double h_j;
                if (spectral_hj) {
                    h_j = mean_target_hitting_spectral(dec, g, cfg.target).H_j;
                } else {
                    const std::vector<double> col = hitting_times_solve(g, cfg.target);
                    const StationaryDistribution pi = stationary_distribution(g);
                    h_j = 0.0;
                    for (std::size_t i = 0; i < col.size(); ++i) h_j += pi.pi[i] * col[i];
                }
                res.values.emplace_back("target", standardized_target_statistic(h_j, n, p));
                break;
            }
            case StatKind::Edge:
                res.values.emplace_back("edge", standardized_edge_statistic(g, cfg.target));
                break;
            case StatKind::Log:
                res.values.emplace_back("log", standardized_log_statistic(g, cfg.target));
                break;
            case StatKind::Diagnostics: {
                const NegligibilityDiagnostics d =
                    negligibility_diagnostics(dec, g, cfg.target);
                res.values.emplace_back("diag_pi_term", d.pi_term);
                res.values.emplace_back("diag_z_term", d.z_term);
                res.values.emplace_back("diag_log_sum_term", d.log_sum_term);
                res.values.emplace_back("diag_lambda_sq_term", d.lambda_sq_term);
                break;
            }
        }
    }
    return res;
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace detail

/// Runs the replicated experiment. Replications execute on `workers` threads
/// (0 = hardware concurrency); results are keyed by replication index, so the
/// report is bit-identical regardless of schedule.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, int workers = 0) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    int w = workers > 0 ? workers
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    w = std::min<int>(w, cfg.replications);

    ExperimentReport report;
    report.config = cfg;
    report.rng_id = std::string(kRngId);
    report.workers = w;

    for (int n : cfg.n_grid) {
        const double p = cfg.p_rule.realize(n);
        std::vector<detail::ReplicationResult> results(
            static_cast<std::size_t>(cfg.replications));

        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto body = [&]() {
            for (int rep = next.fetch_add(1); rep < cfg.replications; rep = next.fetch_add(1)) {
                try {
                    results[static_cast<std::size_t>(rep)] =
                        detail::run_replication(cfg, n, p, rep);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        if (w == 1) {
            body();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(w));
            for (int t = 0; t < w; ++t) pool.emplace_back(body);
            for (auto& th : pool) th.join();
        }
        if (first_error) std::rethrow_exception(first_error);

        RejectionRecord rej{n, 0, 0};
        for (const auto& r : results) {
            rej.rejected_draws += r.rejected;
            if (r.dropped) ++rej.dropped_replications;
        }
        const std::int64_t accepted = cfg.replications - rej.dropped_replications;
        if (rej.rejected_draws > accepted)
            throw TooManyRejections("more than half of the samples at n = " + std::to_string(n) +
                                    " were disconnected; p-rule below the connectivity regime");
        report.rejections.push_back(rej);

        for (int rep = 0; rep < cfg.replications; ++rep) {
            const auto& r = results[static_cast<std::size_t>(rep)];
            if (r.dropped) continue;
            for (const auto& [name, value] : r.values)
                report.samples.push_back({n, p, rep, name, value});
        }

        // Summaries per statistic kind, in first-seen order.
        std::vector<std::string> kinds;
        for (const auto& r : results) {
            if (r.dropped) continue;
            for (const auto& [name, value] : r.values)
                if (std::find(kinds.begin(), kinds.end(), name) == kinds.end())
                    kinds.emplace_back(name);
            break;
        }
        for (const std::string& kind : kinds) {
            std::vector<double> vals;
            vals.reserve(static_cast<std::size_t>(accepted));
            for (const auto& r : results) {
                if (r.dropped) continue;
                for (const auto& [name, value] : r.values)
                    if (kind == name) vals.push_back(value);
            }
            if (vals.empty()) continue;
            if (kind.rfind("diag_", 0) == 0) {
                std::vector<double> abs_vals(vals.size());
                double mean = 0.0;
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    abs_vals[i] = std::abs(vals[i]);
                    mean += vals[i];
                }
                report.diagnostics.push_back({n, kind, vals.size(),
                                              detail::median_of(std::move(abs_vals)),
                                              mean / static_cast<double>(vals.size())});
            } else {
                report.summaries.push_back({n, p, kind, summary_stats(vals)});
            }
        }
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

// ---------------------------------------------------------------------------
// JSON config / report serialization and the flat samples CSV.
// ---------------------------------------------------------------------------

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known{"schema",       "n_grid", "p_rule",
                                                "target",       "replications",
                                                "master_seed",  "method", "statistics"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ParseError("unknown config field '" + it.key() + "'");
    if (j.value("schema", 1) != 1) throw ParseError("unsupported config schema");
    ExperimentConfig cfg;
    if (!j.contains("n_grid")) throw ParseError("config missing n_grid");
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    if (!j.contains("p_rule")) throw ParseError("config missing p_rule");
    const auto& pr = j.at("p_rule");
    const std::string kind = pr.at("kind").get<std::string>();
    if (kind == "constant") {
        cfg.p_rule = {PRule::Kind::Constant, pr.at("p").get<double>()};
    } else if (kind == "c_log_n") {
        cfg.p_rule = {PRule::Kind::CLogN, pr.at("c").get<double>()};
    } else {
        throw ParseError("unknown p_rule kind '" + kind + "'");
    }
    cfg.target = j.value("target", 0);
    if (!j.contains("replications")) throw ParseError("config missing replications");
    cfg.replications = j.at("replications").get<int>();
    if (!j.contains("master_seed")) throw ParseError("config missing master_seed");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    const std::string method = j.value("method", "auto");
    if (method == "auto") cfg.method = HjMethod::Auto;
    else if (method == "solve") cfg.method = HjMethod::Solve;
    else if (method == "spectral") cfg.method = HjMethod::Spectral;
    else throw ParseError("unknown method '" + method + "'");
    if (j.contains("statistics")) {
        cfg.statistics.clear();
        for (const auto& s : j.at("statistics")) {
            const std::string name = s.get<std::string>();
            if (name == "target") cfg.statistics.push_back(StatKind::Target);
            else if (name == "edge") cfg.statistics.push_back(StatKind::Edge);
            else if (name == "log") cfg.statistics.push_back(StatKind::Log);
            else if (name == "diagnostics") cfg.statistics.push_back(StatKind::Diagnostics);
            else throw ParseError("unknown statistic '" + name + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json pr;
    if (cfg.p_rule.kind == PRule::Kind::Constant)
        pr = {{"kind", "constant"}, {"p", cfg.p_rule.value}};
    else
        pr = {{"kind", "c_log_n"}, {"c", cfg.p_rule.value}};
    nlohmann::json stats = nlohmann::json::array();
    for (StatKind k : cfg.statistics) stats.push_back(detail::stat_kind_name(k));
    return {{"schema", 1},
            {"n_grid", cfg.n_grid},
            {"p_rule", pr},
            {"target", cfg.target},
            {"replications", cfg.replications},
            {"master_seed", cfg.master_seed},
            {"method", detail::method_name(cfg.method)},
            {"statistics", stats}};
}

inline nlohmann::json report_to_json(const ExperimentReport& rep) {
    nlohmann::json summaries = nlohmann::json::array();
    for (const auto& s : rep.summaries)
        summaries.push_back({{"n", s.n},
                             {"p", s.p},
                             {"statistic", s.statistic},
                             {"count", s.stats.count},
                             {"mean", s.stats.mean},
                             {"variance", s.stats.variance},
                             {"skewness", s.stats.skewness},
                             {"excess_kurtosis", s.stats.excess_kurtosis},
                             {"ks_distance", s.stats.ks_distance}});
    nlohmann::json diag = nlohmann::json::array();
    for (const auto& d : rep.diagnostics)
        diag.push_back({{"n", d.n},
                        {"statistic", d.statistic},
                        {"count", d.count},
                        {"median_abs", d.median_abs},
                        {"mean", d.mean}});
    nlohmann::json rejections = nlohmann::json::array();
    for (const auto& r : rep.rejections)
        rejections.push_back({{"n", r.n},
                              {"rejected_draws", r.rejected_draws},
                              {"dropped_replications", r.dropped_replications}});
    return {{"schema", 1},
            {"config", config_to_json(rep.config)},
            {"rng_id", rep.rng_id},
            {"p_bound_note", "all realized p checked against (0,1) at generation"},
            {"summaries", summaries},
            {"diagnostics", diag},
            {"rejections", rejections},
            {"runtime", {{"seconds", rep.runtime_seconds}, {"workers", rep.workers}}}};
}

/// Flat CSV of all samples: n,p,rep,statistic,value.
inline std::string samples_to_csv(const ExperimentReport& rep) {
    std::string out = "n,p,rep,statistic,value\n";
    for (const auto& s : rep.samples) {
        out += std::to_string(s.n);
        out += ',';
        out += io::format_double(s.p);
        out += ',';
        out += std::to_string(s.rep);
        out += ',';
        out += s.statistic;
        out += ',';
        out += io::format_double(s.value);
        out += '\n';
    }
    return out;
}

}  // namespace erwalk
