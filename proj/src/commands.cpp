#include "fspde/commands.hpp"

#include <algorithm>
#include <cmath>

#include "fspde/analysis.hpp"
#include "fspde/common.hpp"
#include "fspde/io.hpp"
#include "fspde/stats.hpp"

namespace fspde {

namespace fs = std::filesystem;

namespace {

struct Run {
    const ExperimentConfig& config;
    fs::path dir;
    std::uint64_t seed;
    Json manifest;

    Run(const ExperimentConfig& c, const CommandOptions& o, const std::string& command)
        : config(c), dir(o.out.value_or(fs::path(c.output))), seed(o.seed.value_or(c.seed)) {
        manifest = {{"version", kVersion},
                    {"command", command},
                    {"config", c.to_json()},
                    {"config_hash", hex64(c.hash())},
                    {"seed", seed},
                    {"outputs", Json::array()}};
    }

    void write(const std::string& name, const std::string& content) {
        write_file_atomic(dir / name, content);
        manifest["outputs"].push_back(name);
    }

    void finish(bool pass) {
        manifest["pass"] = pass;
        write_json(dir / "manifest.json", manifest);
    }
};

Json mode_seeds(std::uint64_t seed, std::size_t n_modes) {
    Json out = Json::array();
    for (std::size_t i = 1; i <= n_modes; ++i) out.push_back(hex64(derive_seed(seed, i)));
    return out;
}

std::string noise_csv(const NoiseField& noise) {
    std::vector<std::string> header{"t"};
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(noise.grid().size()),
                         static_cast<Eigen::Index>(noise.n_modes() + 1));
    rows.col(0) = noise.grid().points();
    for (std::size_t i = 0; i < noise.n_modes(); ++i) {
        header.push_back("B" + std::to_string(i + 1));
        rows.col(static_cast<Eigen::Index>(i + 1)) = noise.mode_path(i).values;
    }
    return to_csv(header, rows);
}

SampleSpec sample_spec(const ExperimentConfig& c, std::uint64_t seed) {
    SampleSpec s;
    s.n_time = c.sample_time_steps;
    s.n_samples = c.sample_count;
    s.seed = seed;
    s.horizon = c.horizon;
    return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

int verify_kernel(Run& run, std::ostream& log) {
    const auto& c = run.config;
    const auto space = c.space();
    const SpectralKernel kernel(c.diffusivity, space, c.kernel_modes);
    const auto identities = check_kernel_identities(kernel, run.seed, c.horizon);
    const auto gauss = check_gaussian_bound(kernel, sample_spec(c, run.seed));

    const std::vector<double> gaps{1e-3, 1e-2, 1e-1};
    Eigen::MatrixXd rows(space->x.size(), static_cast<Eigen::Index>(gaps.size() + 1));
    rows.col(0) = space->x;
    std::vector<std::string> header{"x"};
    for (std::size_t j = 0; j < gaps.size(); ++j) {
        header.push_back("G(t-s=" + format_double(gaps[j]) + ")");
        for (Eigen::Index i = 0; i < space->x.size(); ++i) {
            rows(i, static_cast<Eigen::Index>(j + 1)) = kernel.green(space->x[i], gaps[j], 0.5, 0.0);
        }
    }
    run.write("kernel_slice.csv", to_csv(header, rows));
    Json report{{"symmetry", identities.symmetry},
                {"semigroup", identities.semigroup},
                {"self_adjoint", identities.self_adjoint},
                {"mass", identities.mass},
                {"overlap", identities.overlap},
                {"tau_switch", kernel.tau_switch()},
                {"identities_pass", identities.pass},
                {"gaussian_bound", to_json(gauss)}};
    const bool pass = identities.pass && gauss.pass;
    report["pass"] = pass;
    write_json(run.dir / "kernel.json", report);
    run.manifest["outputs"].push_back("kernel.json");
    run.manifest["report"] = report;
    log << "kernel identities " << (identities.pass ? "pass" : "FAIL") << ", gaussian bound c = "
        << format_double(gauss.fitted_c) << " (drift " << format_double(gauss.drift) << ")\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int verify_lemma(Run& run, std::ostream& log, bool second_difference) {
    const auto& c = run.config;
    const SpectralKernel kernel(c.diffusivity, nullptr, c.kernel_modes);
    Json list = Json::array();
    bool pass = true;
    for (double delta : c.deltas) {
        if (second_difference) {
            const auto w = check_second_difference(kernel, delta, sample_spec(c, run.seed));
            Json j = to_json(w);
            j["delta"] = delta;
            list.push_back(j);
            pass = pass && w.pass;
            log << "delta " << delta << ": " << w.name << " ratio " << format_double(w.max_ratio) << " drift "
                << format_double(w.drift) << (w.pass ? " pass" : " FAIL") << "\n";
        } else {
            const auto r = check_lemma1(kernel, delta, sample_spec(c, run.seed));
            list.push_back(to_json(r));
            pass = pass && r.pass;
            for (const auto& w : r.inequalities) {
                log << "delta " << delta << ": " << w.name << " ratio " << format_double(w.max_ratio) << " drift "
                    << format_double(w.drift) << " slope " << format_double(w.slope) << (w.pass ? " pass" : " FAIL")
                    << "\n";
            }
        }
    }
    const std::string name = second_difference ? "second_difference.json" : "lemma1.json";
    Json report{{"results", list}, {"pass", pass}};
    write_json(run.dir / name, report);
    run.manifest["outputs"].push_back(name);
    run.manifest["report"] = report;
    return pass ? kExitOk : kExitCheckFailed;
}

int verify_bound_i(Run& run, std::ostream& log) {
    const auto& c = run.config;
    const auto space = c.space();
    const TimeGrid grid = c.time_grid();
    std::vector<OperatorPath> paths;
    std::vector<double> norms;
    for (std::size_t p = 0; p < c.bound_paths; ++p) {
        paths.push_back(random_smooth_operator(grid, space, c.noise_modes, derive_seed(run.seed, 0x10000 + p)));
        norms.push_back(operator_norm_alpha_1(paths.back(), c.alpha));
    }
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(c.bound_paths * c.bound_seeds), 5);
    std::size_t violations = 0;
    double worst = 0.0;
    Eigen::Index row = 0;
    for (std::size_t s = 0; s < c.bound_seeds; ++s) {
        const NoiseField noise = c.noise(space, derive_seed(run.seed, 0x20000 + s));
        const double r = r_alpha_H(noise, c.alpha);
        for (std::size_t p = 0; p < paths.size(); ++p) {
            const auto rep = check_bound_i(paths[p], noise, r, norms[p]);
            const double ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
            worst = std::max(worst, ratio);
            if (!rep.pass) ++violations;
            rows.row(row++) << static_cast<double>(p), static_cast<double>(s), rep.lhs, rep.rhs, ratio;
        }
    }
    run.write("bound_i.csv", to_csv({"path", "seed_index", "lhs", "rhs", "ratio"}, rows));
    const bool pass = violations == 0;
    Json report{{"checks", c.bound_paths * c.bound_seeds},
                {"violations", violations},
                {"max_ratio", worst},
                {"slack", kInequalitySlack},
                {"pass", pass}};
    write_json(run.dir / "bound_i.json", report);
    run.manifest["outputs"].push_back("bound_i.json");
    run.manifest["report"] = report;
    log << "bound (i): " << violations << " violations in " << c.bound_paths * c.bound_seeds
        << " checks, max lhs/rhs " << format_double(worst) << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int verify_factorization(Run& run, const CommandOptions& options, std::ostream& log) {
    const auto& c = run.config;
    const std::size_t levels = std::max<std::size_t>(1, options.refine);
    const auto space = c.space();
    const NoiseField finest = c.noise(space, run.seed);
    const auto kernel = c.kernel(space);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(levels), 2);
    std::vector<double> rel;
    Json list = Json::array();
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t factor = std::size_t{1} << (levels - 1 - j);
        if (c.n_steps % factor) throw ConfigError("config", "config: n_steps does not coarsen by " + std::to_string(factor));
        Problem p;
        p.kernel = kernel;
        p.noise = std::make_shared<const NoiseField>(
            finest.restricted(TimeGrid(c.horizon, c.n_steps / factor), space, c.noise_modes));
        p.nonlinearity = {c.g, c.h, c.gamma};
        p.initial = InitialCondition::cosine_series(space, c.phi);
        p.alpha = c.alpha;
        p.tol = c.tol;
        p.max_iter = c.max_iter;
        const auto u = solve_mild_picard(p);
        const auto rep = factorization_reconstruct(*kernel, u.states, c.h, *p.noise, c.epsilon);
        rel.push_back(rep.relative);
        Json jr = to_json(rep);
        jr["n_steps"] = c.n_steps / factor;
        list.push_back(jr);
        rows.row(static_cast<Eigen::Index>(j)) << static_cast<double>(c.n_steps / factor), rep.relative;
        log << "factorization n_steps=" << c.n_steps / factor << ": relative discrepancy "
            << format_double(rep.relative) << "\n";
    }
    run.write("factorization.csv", to_csv({"n_steps", "relative"}, rows));
    const bool decreasing = strictly_decreasing(rel);
    const bool pass = decreasing && rel.back() <= kFactorizationThreshold;
    Json report{{"levels", list}, {"decreasing", decreasing}, {"threshold", kFactorizationThreshold}, {"pass", pass}};
    write_json(run.dir / "factorization.json", report);
    run.manifest["outputs"].push_back("factorization.json");
    run.manifest["mode_seeds"] = mode_seeds(run.seed, c.noise_modes);
    run.manifest["report"] = report;
    return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    const HypothesisReport hyp = config.validate();
    Run run(config, options, "simulate");
    run.manifest["hypotheses"] = to_json(hyp);
    run.manifest["mode_seeds"] = mode_seeds(run.seed, config.noise_modes);

    const Problem problem = config.problem(run.seed);
    run.write("noise.csv", noise_csv(*problem.noise));
    run.manifest["r_alpha_H"] = r_alpha_H(*problem.noise, config.alpha);

    Json solutions = Json::array();
    std::optional<SolutionPath> mild;
    std::optional<SolutionPath> galerkin;
    if (config.method != "galerkin") {
        mild = solve_mild_picard(problem);
        run.write("solution_mild.csv", solution_csv(*mild));
        Json j = to_json(*mild);
        j["residual"] = mild_residual(problem, *mild);
        solutions.push_back(j);
        log << "mild: " << mild->iterations << " Picard iterations, ||u||_{alpha,2,T} = "
            << format_double(mild->norms.norm_alpha_2_T) << "\n";
    }
    if (config.method != "mild") {
        galerkin = solve_galerkin(problem);
        run.write("solution_galerkin.csv", solution_csv(*galerkin));
        solutions.push_back(to_json(*galerkin));
        log << "galerkin: ||u||_{alpha,2,T} = " << format_double(galerkin->norms.norm_alpha_2_T) << "\n";
    }
    run.manifest["solutions"] = solutions;
    if (mild && galerkin) {
        const auto cmp = compare_solutions(*mild, *galerkin);
        run.manifest["comparison"] = to_json(cmp);
        log << "sup_t relative L2 distance mild/galerkin = " << format_double(cmp.relative) << "\n";
    }
    run.finish(true);
    return kExitOk;
}

int cmd_verify(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    Run run(config, options, "verify " + options.which);
    int code = kExitOk;
    if (options.which == "kernel") {
        code = verify_kernel(run, log);
    } else if (options.which == "lemma1") {
        code = verify_lemma(run, log, false);
    } else if (options.which == "eq44") {
        code = verify_lemma(run, log, true);
    } else if (options.which == "bound-i") {
        config.validate();
        code = verify_bound_i(run, log);
    } else if (options.which == "factorization") {
        config.validate();
        code = verify_factorization(run, options, log);
    } else {
        throw ConfigError("config", "verify: unknown target '" + options.which +
                                        "' (kernel | bound-i | lemma1 | eq44 | factorization)");
    }
    run.finish(code == kExitOk);
    return code;
}

int cmd_holder(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    const HypothesisReport hyp = config.validate();
    Run run(config, options, "holder");
    run.manifest["hypotheses"] = to_json(hyp);

    double bound = 0.0;
    const bool gamma_ok = config.gamma > 0.0 && config.gamma <= 1.0;
    if (gamma_ok) {
        bound = theoretical_holder_bound(config.alpha, config.beta, config.hurst, config.gamma, 1,
                                         {config.h.is_constant(), config.h.is_affine()})
                    .applicable;
    }

    const std::size_t n = std::max<std::size_t>(1, config.ensemble);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), 6);
    std::vector<std::string> scatter_header{"member", "lag", "increment"};
    std::vector<Eigen::RowVector3d> scatter;
    std::vector<double> prefactors;
    std::vector<double> rs;
    std::size_t defined = 0;
    std::size_t passed = 0;
    Json seeds = Json::array();
    for (std::size_t e = 0; e < n; ++e) {
        const std::uint64_t member_seed = n == 1 ? run.seed : derive_seed(run.seed, 0x30000 + e);
        seeds.push_back(hex64(member_seed));
        const Problem problem = config.problem(member_seed);
        const auto u = solve_mild_picard(problem);
        auto rep = estimate_holder(u);
        rep.bound = bound;
        rep.pass = !rep.undefined_slope && bound > 0.0 && rep.theta >= kHolderBoundFraction * bound;
        const double r = r_alpha_H(*problem.noise, config.alpha);
        if (!rep.undefined_slope) {
            ++defined;
            prefactors.push_back(rep.prefactor);
            rs.push_back(r);
        }
        if (rep.pass) ++passed;
        rows.row(static_cast<Eigen::Index>(e)) << static_cast<double>(e), rep.theta, rep.r2, rep.prefactor, r,
            rep.pass ? 1.0 : 0.0;
        for (std::size_t l = 0; l < rep.lags.size(); ++l) {
            scatter.emplace_back(static_cast<double>(e), rep.lags[l], rep.increments[l]);
        }
    }
    Eigen::MatrixXd scatter_rows(static_cast<Eigen::Index>(scatter.size()), 3);
    for (std::size_t i = 0; i < scatter.size(); ++i) scatter_rows.row(static_cast<Eigen::Index>(i)) = scatter[i];
    run.write("holder.csv", to_csv({"member", "theta", "r2", "prefactor", "r_alpha_H", "pass"}, rows));
    run.write("holder_regression.csv", to_csv(scatter_header, scatter_rows));

    const double rate = defined > 0 ? static_cast<double>(passed) / static_cast<double>(defined) : 0.0;
    const double rho = prefactors.size() >= 3 ? stats::spearman(prefactors, rs) : std::nan("");
    const bool pass = defined == 0 || rate >= kHolderPassRate;
    Json report{{"bound", bound},
                {"fraction", kHolderBoundFraction},
                {"members", n},
                {"defined", defined},
                {"undefined_slope", defined < n},
                {"pass_rate", rate},
                {"required_rate", kHolderPassRate},
                {"spearman_prefactor_r_alpha_H", std::isfinite(rho) ? Json(rho) : Json(nullptr)},
                {"member_seeds", seeds},
                {"pass", pass}};
    write_json(run.dir / "holder.json", report);
    run.manifest["outputs"].push_back("holder.json");
    run.manifest["report"] = report;
    log << "holder: bound " << format_double(bound) << ", pass rate " << format_double(rate) << " over " << defined
        << " members" << (defined < n ? " (undefined slopes present)" : "") << "\n";
    run.finish(pass);
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_compare(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
    const HypothesisReport hyp = config.validate();
    Run run(config, options, "compare");
    run.manifest["hypotheses"] = to_json(hyp);
    run.manifest["mode_seeds"] = mode_seeds(run.seed, config.noise_modes);

    const std::size_t levels = std::max<std::size_t>(1, options.refine);
    const NoiseField finest = config.noise(config.space(), run.seed);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(levels), 7);
    std::vector<double> rel;
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t level = levels - 1 - j;
        const Problem p = config.coarsened_problem(finest, level);
        const auto mild = solve_mild_picard(p);
        const auto gal = solve_galerkin(p);
        const auto cmp = compare_solutions(mild, gal);
        rel.push_back(cmp.relative);
        const std::size_t f = std::size_t{1} << level;
        rows.row(static_cast<Eigen::Index>(j)) << static_cast<double>(config.n_steps / f),
            static_cast<double>(config.n_x / f), static_cast<double>(config.noise_modes / f),
            static_cast<double>(config.kernel_modes / f), cmp.sup_distance, cmp.relative,
            static_cast<double>(mild.iterations);
        log << "level (" << config.n_steps / f << ", " << config.n_x / f << ", " << config.noise_modes / f << ", "
            << config.kernel_modes / f << "): relative distance " << format_double(cmp.relative) << "\n";
    }
    run.write("compare.csv",
              to_csv({"n_steps", "n_x", "noise_modes", "kernel_modes", "sup_distance", "relative", "picard_iterations"},
                     rows));
    const bool decreasing = strictly_decreasing(rel);
    const bool pass = decreasing && rel.back() <= kCompareThreshold;
    Json report{{"relative", rel}, {"decreasing", decreasing}, {"threshold", kCompareThreshold}, {"pass", pass}};
    write_json(run.dir / "compare.json", report);
    run.manifest["outputs"].push_back("compare.json");
    run.manifest["report"] = report;
    run.finish(pass);
    return pass ? kExitOk : kExitCheckFailed;
}

int run_command(const std::string& command, const fs::path& config_path, const CommandOptions& options,
                std::ostream& log, std::ostream& err) {
    try {
        const ExperimentConfig config =
            config_path.empty() ? ExperimentConfig::from_json(Json::object()) : ExperimentConfig::load(config_path);
        if (command == "simulate") return cmd_simulate(config, options, log);
        if (command == "verify") return cmd_verify(config, options, log);
        if (command == "holder") return cmd_holder(config, options, log);
        if (command == "compare") return cmd_compare(config, options, log);
        err << "unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error " << e.hypothesis() << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << "; history:";
        for (double h : e.history()) err << ' ' << format_double(h);
        err << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace fspde
