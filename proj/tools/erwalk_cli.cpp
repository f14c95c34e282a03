// erwalk: generate ER graph realizations, analyze their normalized-adjacency
// spectra, compute hitting times by three routes, and run batch CLT
// experiments with stable on-disk formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "erwalk/clt.hpp"
#include "erwalk/error.hpp"
#include "erwalk/experiment.hpp"
#include "erwalk/graph.hpp"
#include "erwalk/hitting.hpp"
#include "erwalk/io.hpp"
#include "erwalk/spectral.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json source_meta(const erwalk::GraphSample& g) {
    return {{"n", g.n()}, {"p", g.p()}, {"seed", g.seed()}, {"rng_id", g.rng_id()}};
}

/// Input prefixes are usage-level: both files must exist before any work.
erwalk::GraphSample load_graph_checked(const std::string& prefix) {
    if (!fs::exists(erwalk::io::edges_path(prefix)) || !fs::exists(erwalk::io::meta_path(prefix)))
        throw CLI::ValidationError("input", "no graph found at prefix '" + prefix + "'");
    return erwalk::io::read_graph(prefix);
}

void write_json(const fs::path& path, const json& j) {
    erwalk::io::atomic_write_file(path, j.dump(2) + "\n");
}

struct GenArgs {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct SpectrumArgs {
    std::string in, out, eigenvectors;
};

struct HitArgs {
    std::string in, out;
    int target = 0;
    std::string method = "spectral";
    std::int64_t trials = 100000;
    std::uint64_t seed = 0;
    bool column = false;
};

struct CltArgs {
    std::string config, out, samples;
    int workers = 0;
};

struct DiagArgs {
    std::string in, out;
    int target = 0;
};

int run_gen(const GenArgs& a) {
    const erwalk::GraphSample g = erwalk::sample_er_graph(a.n, a.p, a.seed);
    erwalk::io::write_graph(g, a.out);
    return 0;
}

int run_spectrum(const SpectrumArgs& a) {
    const erwalk::GraphSample g = load_graph_checked(a.in);
    const erwalk::SpectralDecomposition dec =
        erwalk::eigendecompose(erwalk::build_normalized_adjacency(g));
    const erwalk::SpectralGapStatistic gap = erwalk::spectral_gap_statistic(dec, g.n(), g.p());
    const erwalk::DelocalizationStatistic deloc =
        erwalk::delocalization_statistic(dec, g.n(), g.p());

    json eigenvalues = json::array();
    for (int k = 0; k < dec.n(); ++k) eigenvalues.push_back(dec.eigenvalues(k));
    const json report{
        {"schema", 1},
        {"source", source_meta(g)},
        {"eigenvalues", eigenvalues},
        {"residual", dec.residual},
        {"degenerate", dec.degenerate},
        {"gap",
         {{"max_abs_nontrivial", gap.max_abs_nontrivial},
          {"normalized_ratio", gap.normalized_ratio}}},
        {"delocalization",
         {{"max_inf_norm_sq", deloc.max_inf_norm_sq},
          {"conjecture_ratio", deloc.conjecture_ratio},
          {"degenerate", deloc.degenerate}}}};
    write_json(a.out, report);

    if (!a.eigenvectors.empty()) {
        std::cerr << "warning: dumping " << dec.n() << "x" << dec.n()
                  << " eigenvector matrix to " << a.eigenvectors << "\n";
        std::string csv;
        for (int k = 0; k < dec.n(); ++k) {
            for (int r = 0; r < dec.n(); ++r) {
                if (r) csv += ',';
                csv += erwalk::io::format_double(dec.eigenvectors(r, k));
            }
            csv += '\n';
        }
        erwalk::io::atomic_write_file(a.eigenvectors, csv);
    }
    return 0;
}

int run_hit(const HitArgs& a) {
    const erwalk::GraphSample g = load_graph_checked(a.in);
    if (a.target < 0 || a.target >= g.n())
        throw erwalk::IndexOutOfRange("target " + std::to_string(a.target) + " not in [0, " +
                                      std::to_string(g.n()) + ")");
    json report{{"schema", 1},
                {"source", source_meta(g)},
                {"target", a.target},
                {"method", a.method}};

    if (a.method == "spectral") {
        const erwalk::SpectralDecomposition dec =
            erwalk::eigendecompose(erwalk::build_normalized_adjacency(g));
        const erwalk::HittingProfile prof =
            erwalk::mean_target_hitting_spectral(dec, g, a.target, a.column);
        report["H_j"] = prof.H_j;
        report["decomposition"] = {{"spectral_sum", prof.spectral_sum},
                                   {"pi_j", prof.pi_j},
                                   {"Z_n", prof.Z_n}};
        if (a.column) report["H_column"] = prof.H_column;
    } else if (a.method == "solve") {
        const std::vector<double> col = erwalk::hitting_times_solve(g, a.target);
        const erwalk::StationaryDistribution pi = erwalk::stationary_distribution(g);
        double h_j = 0.0;
        for (std::size_t i = 0; i < col.size(); ++i) h_j += pi.pi[i] * col[i];
        report["H_j"] = h_j;
        if (a.column) report["H_column"] = col;
    } else {  // mc
        const erwalk::McEstimate est =
            erwalk::mean_target_hitting_mc(g, a.target, a.trials, a.seed);
        report["H_j"] = est.mean;
        report["mc"] = {{"trials", est.trials}, {"std_error", est.std_error}, {"seed", a.seed}};
    }
    write_json(a.out, report);
    return 0;
}

int run_clt(const CltArgs& a) {
    json cfg_json;
    try {
        cfg_json = json::parse(erwalk::io::read_file(a.config));
    } catch (const json::exception& e) {
        throw erwalk::ParseError("config: " + std::string(e.what()));
    }
    const erwalk::ExperimentConfig cfg = erwalk::config_from_json(cfg_json);
    const erwalk::ExperimentReport report = erwalk::run_experiment(cfg, a.workers);
    write_json(a.out, erwalk::report_to_json(report));
    erwalk::io::atomic_write_file(a.samples, erwalk::samples_to_csv(report));
    return 0;
}

int run_diag(const DiagArgs& a) {
    const erwalk::GraphSample g = load_graph_checked(a.in);
    if (a.target < 0 || a.target >= g.n())
        throw erwalk::IndexOutOfRange("target out of range");
    const erwalk::SpectralDecomposition dec =
        erwalk::eigendecompose(erwalk::build_normalized_adjacency(g));
    const erwalk::SpectralGapStatistic gap = erwalk::spectral_gap_statistic(dec, g.n(), g.p());
    const erwalk::DelocalizationStatistic deloc =
        erwalk::delocalization_statistic(dec, g.n(), g.p());
    const erwalk::NegligibilityDiagnostics neg =
        erwalk::negligibility_diagnostics(dec, g, a.target);
    const erwalk::SpectralIdentityReport ids =
        erwalk::verify_spectral_identities(dec, g, a.target);
    const erwalk::SumDecomposition sd = erwalk::sum_decomposition(dec, g, a.target);

    const json report{
        {"schema", 1},
        {"source", source_meta(g)},
        {"target", a.target},
        {"gap",
         {{"max_abs_nontrivial", gap.max_abs_nontrivial},
          {"normalized_ratio", gap.normalized_ratio}}},
        {"delocalization",
         {{"max_inf_norm_sq", deloc.max_inf_norm_sq},
          {"conjecture_ratio", deloc.conjecture_ratio},
          {"degenerate", deloc.degenerate}}},
        {"negligibility",
         {{"pi_term", neg.pi_term},
          {"z_term", neg.z_term},
          {"log_sum_term", neg.log_sum_term},
          {"lambda_sq_term", neg.lambda_sq_term},
          {"lambda_sq_trace_term", neg.lambda_sq_term + g.p()}}},
        {"identities",
         {{"basis_residual", ids.basis_residual},
          {"moment_residual", ids.moment_residual},
          {"pi_residual", ids.pi_residual},
          {"sum_identity_residual",
           std::abs(sd.spectral_sum - (1.0 - 2.0 * sd.pi_j + sd.z_n))}}}};
    write_json(a.out, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hitting times and spectral statistics of random walks on ER graphs"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "sample a G(n,p) realization to disk");
    cmd_gen->add_option("--n", gen.n, "vertex count")->required()->check(CLI::Range(1, erwalk::kMaxVertices));
    cmd_gen->add_option("--p", gen.p, "edge probability")->required()->check(CLI::Range(0.0, 1.0));
    cmd_gen->add_option("--seed", gen.seed, "64-bit RNG seed")->required();
    cmd_gen->add_option("--out", gen.out, "output path prefix")->required();

    SpectrumArgs spectrum;
    auto* cmd_spectrum = app.add_subcommand("spectrum", "full spectrum report of a stored graph");
    cmd_spectrum->add_option("--in", spectrum.in, "input path prefix")->required();
    cmd_spectrum->add_option("--out", spectrum.out, "report JSON path")->required();
    cmd_spectrum->add_option("--eigenvectors", spectrum.eigenvectors,
                             "also dump eigenvectors as CSV (row k = v_k); large");

    HitArgs hit;
    auto* cmd_hit = app.add_subcommand("hit", "hitting-time report for a stored graph");
    cmd_hit->add_option("--in", hit.in, "input path prefix")->required();
    cmd_hit->add_option("--out", hit.out, "report JSON path")->required();
    cmd_hit->add_option("--target", hit.target, "target vertex j")->capture_default_str();
    cmd_hit->add_option("--method", hit.method, "spectral | solve | mc")
        ->check(CLI::IsMember({"spectral", "solve", "mc"}))
        ->capture_default_str();
    cmd_hit->add_option("--trials", hit.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd_hit->add_option("--seed", hit.seed, "Monte Carlo seed");
    cmd_hit->add_flag("--column", hit.column, "include the full H_ij column (spectral/solve)");

    CltArgs clt;
    auto* cmd_clt = app.add_subcommand("clt", "run a batch experiment from a config file");
    cmd_clt->add_option("--config", clt.config, "experiment config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_clt->add_option("--out", clt.out, "report JSON path")->required();
    cmd_clt->add_option("--samples", clt.samples, "samples CSV path")->required();
    cmd_clt->add_option("--workers", clt.workers, "worker threads (0 = auto)");

    DiagArgs diag;
    auto* cmd_diag = app.add_subcommand("diag", "gap/delocalization/negligibility diagnostics");
    cmd_diag->add_option("--in", diag.in, "input path prefix")->required();
    cmd_diag->add_option("--out", diag.out, "report JSON path")->required();
    cmd_diag->add_option("--target", diag.target, "target vertex j")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_spectrum->parsed()) return run_spectrum(spectrum);
        if (cmd_hit->parsed()) return run_hit(hit);
        if (cmd_clt->parsed()) return run_clt(clt);
        if (cmd_diag->parsed()) return run_diag(diag);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const erwalk::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}
