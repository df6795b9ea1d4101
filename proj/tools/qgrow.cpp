// qgrow: simulate heralded cat-state ensembles, draw QHD samples, apply the
// virtual-beam-splitter growing protocol, reconstruct by maximum likelihood,
// and report the per-generation metrics.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgrow/breeding.hpp"
#include "qgrow/errors.hpp"
#include "qgrow/fock.hpp"
#include "qgrow/io.hpp"
#include "qgrow/quasiprob.hpp"
#include "qgrow/sampling.hpp"
#include "qgrow/tomography.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace qgrow;

namespace {

constexpr const char* kVersion = "0.1.0";

struct PipelineOptions {
    std::string state = "odd-cat";  // odd-cat | squeezed-vacuum
    double alpha = 1.1;
    double squeeze = 0.6;
    bool subtract = false;
    double eta = 1.0;
    std::size_t samples = 100'000;
    std::uint64_t seed = 1;
    double nbar = 1.3;
    int steps = 2;
    int dim = 18;
    int max_iters = 400;
    double rel_tol = 1e-8;
    double dilution = 0.5;
    std::size_t recon_cap = 400'000;  // cap on samples fed to MaxLik per generation
    std::string grid = "-5:5:-5:5:201:201";
    std::string out;
    int threads = 1;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec spec;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf:%lf:%d:%d", &spec.x_min, &spec.x_max, &spec.y_min,
                    &spec.y_max, &spec.nx, &spec.ny) != 6)
        throw CLI::ValidationError("--grid", "expected xmin:xmax:ymin:ymax:nx:ny");
    return spec;
}

void add_state_flags(CLI::App* cmd, PipelineOptions& opt) {
    cmd->add_option("--state", opt.state, "Initial state: odd-cat or squeezed-vacuum")
        ->check(CLI::IsMember({"odd-cat", "squeezed-vacuum"}));
    cmd->add_option("--alpha", opt.alpha, "Odd-cat amplitude");
    cmd->add_option("--squeeze", opt.squeeze, "Squeeze parameter r");
    cmd->add_flag("--subtract", opt.subtract, "Apply single-photon subtraction");
    cmd->add_option("--eta", opt.eta, "Loss transmissivity in (0, 1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--dim", opt.dim, "Fock truncation dimension");
}

void add_config_file(CLI::App* cmd) {
    cmd->set_config("--config", "", "Plain key = value config file; command line overrides");
}

DensityMatrix build_state(const PipelineOptions& opt) {
    FockVector psi;
    if (opt.state == "odd-cat") {
        psi = odd_cat(opt.alpha, opt.dim);
    } else {
        psi = squeezed_vacuum(opt.squeeze, opt.dim);
        if (opt.subtract) psi = subtract_photon(psi);
    }
    if (psi.truncation_warning)
        std::cerr << "warning: state leaks past the Fock truncation (dim " << opt.dim << ")\n";
    return apply_loss(density_from_pure(psi), opt.eta);
}

json stats_to_json(const BreedingStats& s) {
    return {{"input_count", s.input_count},
            {"pair_count", s.pair_count},
            {"accepted_count", s.accepted_count},
            {"acceptance_fraction", s.acceptance_fraction},
            {"empty_output_warning", s.empty_output_warning}};
}

json config_to_json(const PipelineOptions& opt) {
    return {{"state", opt.state},     {"alpha", opt.alpha},
            {"squeeze", opt.squeeze}, {"subtract", opt.subtract},
            {"eta", opt.eta},         {"samples", opt.samples},
            {"seed", opt.seed},       {"nbar", opt.nbar},
            {"steps", opt.steps},     {"dim", opt.dim},
            {"max_iters", opt.max_iters}, {"rel_tol", opt.rel_tol},
            {"dilution", opt.dilution},   {"recon_cap", opt.recon_cap},
            {"grid", opt.grid},       {"out", opt.out},
            {"threads", opt.threads}};
}

SampleSet truncate_for_reconstruction(const SampleSet& set, std::size_t cap) {
    if (set.count() <= cap) return set;
    SampleSet out;
    out.meta = set.meta;
    out.samples.assign(set.samples.begin(), set.samples.begin() + cap);
    return out;
}

// Per-generation analysis shared by `pipeline` and `report`.
json analyze_generation(const fs::path& dir, const SampleSet& samples, const DensityMatrix& rho_hat,
                        const DensityMatrix& rho_oracle, double oracle_success,
                        double acceptance_fraction, const GridSpec& grid) {
    write_grid(histogram_q(samples, grid), dir / "q_empirical.csv", "histogram of QHD samples");
    write_grid(q_grid(rho_hat, grid), dir / "q_reconstructed.csv", "Q of MaxLik reconstruction");
    auto wig = wigner_grid(rho_hat, grid);
    write_grid(wig, dir / "wigner.csv", "Wigner of MaxLik reconstruction");

    CatFit fit = fit_cat_amplitude(rho_hat);
    CatFit oracle_fit = fit_cat_amplitude(rho_oracle);
    return {{"sample_count", samples.count()},
            {"acceptance_fraction", acceptance_fraction},
            {"fitted_alpha", fit.alpha},
            {"fitted_cat_fidelity", fit.fidelity},
            {"fitted_cat_parity", fit.parity},
            {"mean_photon_number", mean_photon_number(rho_hat)},
            {"wigner_at_origin", wigner_at_origin(rho_hat)},
            {"negativity_volume", negativity_volume(wig)},
            {"oracle_alpha", oracle_fit.alpha},
            {"oracle_success", oracle_success}};
}

void print_summary(const json& report) {
    std::cout << "generation  samples   accept    alpha    fid     <n>     W(0)     negvol  "
                 "oracle_a  oracle_p\n";
    int g = 0;
    for (const auto& rec : report.at("generations")) {
        std::printf("%9d %9zu  %7.4f  %6.3f  %5.3f  %6.3f  %+7.4f  %7.4f  %7.3f  %7.4f\n", g++,
                    std::size_t(rec.at("sample_count")), double(rec.at("acceptance_fraction")),
                    double(rec.at("fitted_alpha")), double(rec.at("fitted_cat_fidelity")),
                    double(rec.at("mean_photon_number")), double(rec.at("wigner_at_origin")),
                    double(rec.at("negativity_volume")), double(rec.at("oracle_alpha")),
                    double(rec.at("oracle_success")));
    }
}

int cmd_simulate(const PipelineOptions& opt, bool csv) {
    DensityMatrix rho = build_state(opt);
    SamplerDiagnostics diag;
    SampleSet set = sample_q(rho, opt.samples, opt.seed, opt.threads, &diag);
    set.meta.source = "simulate " + opt.state;
    if (csv)
        write_sample_set_csv(set, opt.out);
    else
        write_sample_set(set, opt.out);
    std::cout << "wrote " << set.count() << " samples to " << opt.out
              << " (acceptance rate " << diag.acceptance_rate() << ")\n";
    return 0;
}

int cmd_breed(const std::string& input, const BreedingConfig& cfg, const std::string& out_prefix) {
    SampleSet set = read_sample_set_any(input);
    auto generations = breed_iterate(set, cfg);
    json stats = json::array();
    for (std::size_t g = 0; g < generations.size(); ++g) {
        fs::path path = out_prefix + ".gen" + std::to_string(g + 1) + ".qhd";
        write_sample_set(generations[g].first, path);
        json s = stats_to_json(generations[g].second);
        s["file"] = path.string();
        stats.push_back(s);
        if (generations[g].second.empty_output_warning)
            std::cerr << "warning: generation " << g + 1 << " is empty\n";
    }
    std::cout << stats.dump(2) << '\n';
    return 0;
}

int cmd_reconstruct(const std::string& input, const ReconstructionConfig& cfg,
                    const std::string& out, const std::string& trace) {
    SampleSet set = read_sample_set_any(input);
    if (set.count() < 10'000)
        std::cerr << "warning: only " << set.count() << " samples; expect a noisy estimate\n";
    auto res = maxlik_reconstruct(set, cfg);
    write_density_matrix(res.rho, out);
    if (!trace.empty()) write_loglik_trace(res.loglik_trace, trace);
    std::cout << "iterations " << res.iterations << ", converged " << (res.converged ? "yes" : "no")
              << ", final loglik " << res.loglik_trace.back() << '\n';
    return 0;
}

int cmd_quasiprob(const std::string& rho_file, const std::string& samples_file,
                  const GridSpec& grid, const std::string& out_prefix) {
    if (!rho_file.empty()) {
        DensityMatrix rho = read_density_matrix(rho_file);
        write_grid(q_grid(rho, grid), out_prefix + ".q.csv", "Q of " + rho_file);
        write_grid(wigner_grid(rho, grid), out_prefix + ".wigner.csv", "Wigner of " + rho_file);
    }
    if (!samples_file.empty()) {
        SampleSet set = read_sample_set_any(samples_file);
        write_grid(histogram_q(set, grid), out_prefix + ".hist.csv",
                   "histogram of " + samples_file);
    }
    return 0;
}

int run_pipeline(const PipelineOptions& opt, bool regenerate_only) {
    auto t0 = std::chrono::steady_clock::now();
    if (opt.samples < 10'000 && !regenerate_only)
        throw CLI::ValidationError("--samples", "pipeline mode needs at least 10^4 samples");
    GridSpec grid = parse_grid(opt.grid);
    fs::path root = opt.out;
    fs::create_directories(root);

    BreedingConfig breed_cfg;
    breed_cfg.nbar = opt.nbar;
    breed_cfg.steps = opt.steps;

    ReconstructionConfig recon_cfg;
    recon_cfg.dim = opt.dim;
    recon_cfg.max_iters = opt.max_iters;
    recon_cfg.rel_tol = opt.rel_tol;
    recon_cfg.dilution = opt.dilution;
    recon_cfg.threads = opt.threads;

    DensityMatrix rho_true = build_state(opt);

    // Collect samples and stats per generation (generation 0 has no heralding).
    std::vector<SampleSet> sample_sets;
    std::vector<double> acceptance{1.0};
    std::vector<json> stats_records;
    if (regenerate_only) {
        for (int g = 0; g <= opt.steps; ++g) {
            fs::path p = root / ("gen" + std::to_string(g)) / "samples.qhd";
            if (!fs::exists(p))
                throw io_error("missing artifact for generation " + std::to_string(g) + ": " +
                               p.string());
            sample_sets.push_back(read_sample_set(p));
            if (g > 0) {
                fs::path sp = root / ("gen" + std::to_string(g)) / "stats.json";
                if (!fs::exists(sp))
                    throw io_error("missing artifact for generation " + std::to_string(g) + ": " +
                                   sp.string());
                json s;
                std::ifstream(sp) >> s;
                acceptance.push_back(s.at("acceptance_fraction"));
                stats_records.push_back(s);
            }
        }
    } else {
        SampleSet gen0 = sample_q(rho_true, opt.samples, opt.seed, opt.threads);
        gen0.meta.source = "simulate " + opt.state;
        sample_sets.push_back(std::move(gen0));
        auto generations = breed_iterate(sample_sets[0], breed_cfg);
        for (auto& [set, stats] : generations) {
            sample_sets.push_back(std::move(set));
            acceptance.push_back(stats.acceptance_fraction);
            stats_records.push_back(stats_to_json(stats));
        }
    }

    // Exact oracle chain alongside the data path.
    std::vector<DensityMatrix> oracle{rho_true};
    std::vector<double> oracle_success{1.0};
    for (std::size_t g = 1; g < sample_sets.size(); ++g) {
        auto [next, p] = breed_oracle(oracle.back(), breed_cfg.threshold_for_step(int(g) - 1));
        oracle.push_back(std::move(next));
        oracle_success.push_back(p);
    }

    json gen_records = json::array();
    for (std::size_t g = 0; g < sample_sets.size(); ++g) {
        fs::path dir = root / ("gen" + std::to_string(g));
        fs::create_directories(dir);
        if (!regenerate_only) {
            write_sample_set(sample_sets[g], dir / "samples.qhd");
            if (g > 0) {
                std::ofstream stats_out(dir / "stats.json");
                stats_out << stats_records[g - 1].dump(2) << '\n';
            }
        }
        auto res =
            maxlik_reconstruct(truncate_for_reconstruction(sample_sets[g], opt.recon_cap), recon_cfg);
        write_density_matrix(res.rho, dir / "rho.dm");
        write_loglik_trace(res.loglik_trace, dir / "loglik.csv");
        json rec = analyze_generation(dir, sample_sets[g], res.rho, oracle[g], oracle_success[g],
                                      acceptance[g], grid);
        rec["generation"] = g;
        rec["maxlik_iterations"] = res.iterations;
        rec["maxlik_converged"] = res.converged;
        gen_records.push_back(std::move(rec));
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json report{{"config", config_to_json(opt)},
                {"versions", {{"qgrow", kVersion}}},
                {"generations", gen_records},
                {"timing", {{"wall_seconds", wall}}}};
    {
        std::ofstream out(root / "report.json");
        out << report.dump(2) << '\n';
    }
    print_summary(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schroedinger-cat growing pipeline: QHD sampling, virtual-beam-splitter "
                 "breeding, MaxLik tomography"};
    app.require_subcommand(1);

    PipelineOptions opt;
    bool csv_out = false;

    auto* simulate = app.add_subcommand("simulate", "Build a state, draw QHD samples, write them");
    add_state_flags(simulate, opt);
    add_config_file(simulate);
    simulate->add_option("--samples", opt.samples, "Number of QHD samples")->required();
    simulate->add_option("--seed", opt.seed, "RNG seed");
    simulate->add_option("--threads", opt.threads, "Sampler worker streams");
    simulate->add_option("--out", opt.out, "Output sample file")->required();
    simulate->add_flag("--csv", csv_out, "Write CSV instead of binary");

    std::string input, out_prefix, trace_file, rho_file, samples_file;
    BreedingConfig breed_cfg;
    auto* breed = app.add_subcommand("breed", "Apply virtual-beam-splitter growing steps");
    add_config_file(breed);
    breed->add_option("--in", input, "Input sample file")->required();
    breed->add_option("--nbar", breed_cfg.nbar, "Acceptance threshold");
    breed->add_option("--steps", breed_cfg.steps, "Number of growing steps");
    breed->add_option("--per-step-nbar", breed_cfg.per_step_nbar, "Per-step threshold overrides");
    breed->add_option("--out-prefix", out_prefix, "Output prefix (<prefix>.genK.qhd)")->required();

    ReconstructionConfig recon_cfg;
    auto* reconstruct = app.add_subcommand("reconstruct", "MaxLik density-matrix reconstruction");
    add_config_file(reconstruct);
    reconstruct->add_option("--in", input, "Input sample file")->required();
    reconstruct->add_option("--dim", recon_cfg.dim, "Fock truncation dimension");
    reconstruct->add_option("--max-iters", recon_cfg.max_iters, "Iteration cap");
    reconstruct->add_option("--rel-tol", recon_cfg.rel_tol, "Relative log-likelihood tolerance");
    reconstruct->add_option("--dilution", recon_cfg.dilution, "Damping weight in (0, 1]");
    reconstruct->add_option("--threads", recon_cfg.threads, "Worker threads");
    reconstruct->add_option("--out", opt.out, "Output density-matrix file")->required();
    reconstruct->add_option("--trace", trace_file, "Log-likelihood trace CSV");

    auto* quasi = app.add_subcommand("quasiprob", "Evaluate Q/Wigner grids and histograms");
    add_config_file(quasi);
    quasi->add_option("--rho", rho_file, "Density-matrix file (Q + Wigner grids)");
    quasi->add_option("--samples", samples_file, "Sample file (histogram)");
    quasi->add_option("--grid", opt.grid, "Grid spec xmin:xmax:ymin:ymax:nx:ny");
    quasi->add_option("--out-prefix", out_prefix, "Output prefix")->required();

    auto add_pipeline_flags = [&](CLI::App* cmd) {
        add_state_flags(cmd, opt);
        add_config_file(cmd);
        cmd->add_option("--samples", opt.samples, "Initial ensemble size");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--nbar", opt.nbar, "Breeding acceptance threshold");
        cmd->add_option("--steps", opt.steps, "Breeding steps");
        cmd->add_option("--max-iters", opt.max_iters, "MaxLik iteration cap");
        cmd->add_option("--rel-tol", opt.rel_tol, "MaxLik convergence tolerance");
        cmd->add_option("--dilution", opt.dilution, "MaxLik damping weight");
        cmd->add_option("--recon-cap", opt.recon_cap, "Sample cap per MaxLik reconstruction");
        cmd->add_option("--grid", opt.grid, "Grid spec xmin:xmax:ymin:ymax:nx:ny");
        cmd->add_option("--threads", opt.threads, "Worker threads");
        cmd->add_option("--out", opt.out, "Output directory")->required();
    };
    auto* pipeline = app.add_subcommand("pipeline", "Run simulate + breed + reconstruct + report");
    add_pipeline_flags(pipeline);
    auto* report = app.add_subcommand("report", "Recompute the report from existing artifacts");
    add_pipeline_flags(report);

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return cmd_simulate(opt, csv_out);
        if (breed->parsed()) return cmd_breed(input, breed_cfg, out_prefix);
        if (reconstruct->parsed())
            return cmd_reconstruct(input, recon_cfg, opt.out, trace_file);
        if (quasi->parsed())
            return cmd_quasiprob(rho_file, samples_file, parse_grid(opt.grid), out_prefix);
        if (pipeline->parsed()) return run_pipeline(opt, false);
        if (report->parsed()) return run_pipeline(opt, true);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const degenerate_input_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const io_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
