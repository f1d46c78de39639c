#include "fspde/config.hpp"

#include <fstream>
#include <set>

#include "fspde/common.hpp"

namespace fspde {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config", "config: " + what); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(std::string("bad value for '") + key + "': " + e.what());
    }
}

ScalarFunction parse_function(const json& j, const std::string& where) {
    check_keys(j, {"kind", "value", "a", "b", "amplitude", "frequency", "coefficients", "clip"}, where);
    const auto kind = get<std::string>(j, "kind", "zero");
    if (kind == "zero") return ScalarFunction::zero();
    if (kind == "constant") return ScalarFunction::constant(get<double>(j, "value", 0.0));
    if (kind == "affine") return ScalarFunction::affine(get<double>(j, "a", 0.0), get<double>(j, "b", 0.0));
    if (kind == "sine") return ScalarFunction::sine(get<double>(j, "amplitude", 1.0), get<double>(j, "frequency", 1.0));
    if (kind == "clipped_poly") {
        return ScalarFunction::clipped_poly(get<std::vector<double>>(j, "coefficients", {}), get<double>(j, "clip", 1.0));
    }
    fail(where + ": unknown kind '" + kind + "'");
}

json function_json(const ScalarFunction& f) {
    switch (f.kind) {
        case ScalarFunction::Kind::Zero:
            return {{"kind", "zero"}};
        case ScalarFunction::Kind::Constant:
            return {{"kind", "constant"}, {"value", f.a}};
        case ScalarFunction::Kind::Affine:
            return {{"kind", "affine"}, {"a", f.a}, {"b", f.b}};
        case ScalarFunction::Kind::Sine:
            return {{"kind", "sine"}, {"amplitude", f.amplitude}, {"frequency", f.frequency}};
        case ScalarFunction::Kind::ClippedPoly:
            return {{"kind", "clipped_poly"}, {"coefficients", f.coefficients}, {"clip", f.clip}};
    }
    return {};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    check_keys(j,
               {"horizon", "n_steps", "n_x", "noise_modes", "kernel_modes", "hurst", "alpha", "spectrum",
                "diffusivity", "g", "h", "gamma", "phi", "seed", "ensemble", "method", "fbm_method", "tol",
                "max_iter", "theorem_grade", "beta", "deltas", "epsilon", "sample_time_steps", "sample_count",
                "bound_paths", "bound_seeds", "output"},
               "config");
    ExperimentConfig c;
    c.horizon = get(j, "horizon", c.horizon);
    c.n_steps = get(j, "n_steps", c.n_steps);
    c.n_x = get(j, "n_x", c.n_x);
    c.noise_modes = get(j, "noise_modes", c.noise_modes);
    c.kernel_modes = get(j, "kernel_modes", c.kernel_modes);
    c.hurst = get(j, "hurst", c.hurst);
    c.alpha = get(j, "alpha", c.alpha);

    c.covariance = CovarianceSpec::power_law(1.0, 3.0, c.noise_modes);
    if (j.contains("spectrum")) {
        const auto& s = j.at("spectrum");
        check_keys(s, {"c0", "p", "values"}, "spectrum");
        if (s.contains("values")) {
            c.covariance = CovarianceSpec::explicit_list(get<std::vector<double>>(s, "values", {}));
            if (c.covariance.n_modes != c.noise_modes) fail("spectrum.values must list noise_modes eigenvalues");
        } else {
            c.covariance = CovarianceSpec::power_law(get(s, "c0", 1.0), get(s, "p", 3.0), c.noise_modes);
        }
    }

    if (j.contains("diffusivity")) {
        const auto& d = j.at("diffusivity");
        check_keys(d, {"k0", "profile", "amplitude", "frequency", "t", "kappa", "beta", "beta_prime"}, "diffusivity");
        const double k0 = get(d, "k0", 0.1);
        const auto profile = get<std::string>(d, "profile", "constant");
        if (profile == "constant") {
            c.diffusivity = DiffusivitySpec::constant(k0);
        } else if (profile == "sinusoidal") {
            c.diffusivity = DiffusivitySpec::sinusoidal(k0, get(d, "amplitude", 0.0), get(d, "frequency", 1.0));
        } else if (profile == "tabulated") {
            c.diffusivity = DiffusivitySpec::tabulated(k0, get<std::vector<double>>(d, "t", {}),
                                                       get<std::vector<double>>(d, "kappa", {}));
        } else {
            fail("diffusivity: unknown profile '" + profile + "'");
        }
        c.diffusivity.beta = get(d, "beta", 1.0);
        c.diffusivity.beta_prime = get(d, "beta_prime", 1.0);
    }

    if (j.contains("g")) c.g = parse_function(j.at("g"), "g");
    if (j.contains("h")) c.h = parse_function(j.at("h"), "h");
    c.gamma = j.contains("gamma") ? get(j, "gamma", 1.0) : c.h.gamma();
    c.phi = get(j, "phi", c.phi);
    c.seed = get(j, "seed", c.seed);
    c.ensemble = get(j, "ensemble", c.ensemble);
    c.method = get(j, "method", c.method);
    if (c.method != "mild" && c.method != "galerkin" && c.method != "both") fail("method must be mild|galerkin|both");
    const auto fbm = get<std::string>(j, "fbm_method", "circulant");
    if (fbm == "circulant") {
        c.fbm_method = FbmMethod::Circulant;
    } else if (fbm == "dense") {
        c.fbm_method = FbmMethod::Dense;
    } else {
        fail("fbm_method must be circulant|dense");
    }
    c.tol = get(j, "tol", c.tol);
    c.max_iter = get(j, "max_iter", c.max_iter);
    c.theorem_grade = get(j, "theorem_grade", c.theorem_grade);
    c.beta = get(j, "beta", c.beta);
    c.deltas = get(j, "deltas", c.deltas);
    c.epsilon = get(j, "epsilon", c.epsilon);
    c.sample_time_steps = get(j, "sample_time_steps", c.sample_time_steps);
    c.sample_count = get(j, "sample_count", c.sample_count);
    c.bound_paths = get(j, "bound_paths", c.bound_paths);
    c.bound_seeds = get(j, "bound_seeds", c.bound_seeds);
    c.output = get(j, "output", c.output);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(path.string() + ": " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json spectrum = covariance.explicit_values.empty() ? json{{"c0", covariance.c0}, {"p", covariance.decay}}
                                                       : json{{"values", covariance.explicit_values}};
    json diff{{"k0", diffusivity.k0}, {"beta", diffusivity.beta}, {"beta_prime", diffusivity.beta_prime}};
    switch (diffusivity.profile) {
        case DiffusivitySpec::Profile::Constant:
            diff["profile"] = "constant";
            break;
        case DiffusivitySpec::Profile::Sinusoidal:
            diff["profile"] = "sinusoidal";
            diff["amplitude"] = diffusivity.amplitude;
            diff["frequency"] = diffusivity.frequency;
            break;
        case DiffusivitySpec::Profile::Tabulated:
            diff["profile"] = "tabulated";
            diff["t"] = diffusivity.table_t;
            diff["kappa"] = diffusivity.table_kappa;
            break;
    }
    return {{"horizon", horizon},
            {"n_steps", n_steps},
            {"n_x", n_x},
            {"noise_modes", noise_modes},
            {"kernel_modes", kernel_modes},
            {"hurst", hurst},
            {"alpha", alpha},
            {"spectrum", spectrum},
            {"diffusivity", diff},
            {"g", function_json(g)},
            {"h", function_json(h)},
            {"gamma", gamma},
            {"phi", phi},
            {"seed", seed},
            {"ensemble", ensemble},
            {"method", method},
            {"fbm_method", fbm_method == FbmMethod::Circulant ? "circulant" : "dense"},
            {"tol", tol},
            {"max_iter", max_iter},
            {"theorem_grade", theorem_grade},
            {"beta", beta},
            {"deltas", deltas},
            {"epsilon", epsilon},
            {"sample_time_steps", sample_time_steps},
            {"sample_count", sample_count},
            {"bound_paths", bound_paths},
            {"bound_seeds", bound_seeds},
            {"output", output}};
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(to_json().dump()); }

HypothesisInputs ExperimentConfig::hypothesis_inputs() const {
    HypothesisInputs in;
    in.hurst = hurst;
    in.alpha = alpha;
    in.covariance = covariance;
    in.gamma = gamma;
    in.h_affine = h.is_affine();
    in.g_lipschitz = g.verify_lipschitz();
    in.h_lipschitz = h.verify_lipschitz();
    in.phi_smooth_zero_flux = true;  // cosine series: smooth, zero flux at both ends
    in.k_lower = diffusivity.lower_bound(horizon);
    in.dimension = 1;
    return in;
}

HypothesisReport ExperimentConfig::validate() const {
    if (!(horizon > 0.0)) fail("horizon must be positive");
    if (n_steps < 2) fail("n_steps must be >= 2");
    if (n_x < 3) fail("n_x must be >= 3");
    if (noise_modes < 1 || noise_modes >= n_x) fail("noise_modes must lie in [1, n_x)");
    if (kernel_modes < 1 || n_x < 2 * kernel_modes) fail("kernel_modes must satisfy 1 <= M <= n_x / 2");
    if (!(tol > 0.0) || max_iter == 0) fail("tol and max_iter must be positive");
    if (phi.empty() || phi.size() > kernel_modes + 1) fail("phi needs 1..kernel_modes+1 cosine coefficients");
    if (!(epsilon > 0.0 && epsilon < 0.5)) fail("epsilon must lie in (0, 1/2)");
    if (!(beta > 0.0 && beta <= 1.0)) fail("beta must lie in (0, 1]");
    diffusivity.validate();

    HypothesisReport report = check_hypotheses(hypothesis_inputs());
    std::vector<std::string> required{"(C)", "(L)", "(K)", "alpha-range"};
    if (theorem_grade) {
        for (const char* name : {"(I)", "(H_gamma)", "theorem-a"}) required.emplace_back(name);
    }
    for (const auto& name : required) {
        const auto& check = report.find(name);
        if (!check.pass) {
            std::string message = "hypothesis " + name + " violated: " + check.detail;
            if (name == "alpha-range") message += " [requires α ∈ (1−H, 1/2)]";
            throw ConfigError(name, message);
        }
    }
    return report;
}

NoiseField ExperimentConfig::noise(SpatialGridPtr space_grid, std::uint64_t run_seed) const {
    return build_noise(covariance, std::move(space_grid), time_grid(), hurst, run_seed, fbm_method);
}

std::shared_ptr<const SpectralKernel> ExperimentConfig::kernel(SpatialGridPtr space_grid) const {
    return std::make_shared<const SpectralKernel>(diffusivity, std::move(space_grid), kernel_modes);
}

Problem ExperimentConfig::problem(std::uint64_t run_seed) const {
    auto sp = space();
    Problem p;
    p.kernel = kernel(sp);
    p.noise = std::make_shared<const NoiseField>(noise(sp, run_seed));
    p.nonlinearity = {g, h, gamma};
    p.initial = InitialCondition::cosine_series(sp, phi);
    p.alpha = alpha;
    p.tol = tol;
    p.max_iter = max_iter;
    return p;
}

Problem ExperimentConfig::coarsened_problem(const NoiseField& finest, std::size_t level) const {
    const std::size_t f = std::size_t{1} << level;
    if (n_steps % f || noise_modes % f || kernel_modes % f || n_x / f < 2 * (kernel_modes / f)) {
        throw ConfigError("config", "config: counts do not coarsen by 2^" + std::to_string(level));
    }
    auto sp = SpatialGrid::uniform(n_x / f);
    Problem p;
    p.kernel = std::make_shared<const SpectralKernel>(diffusivity, sp, kernel_modes / f);
    p.noise = std::make_shared<const NoiseField>(finest.restricted(TimeGrid(horizon, n_steps / f), sp, noise_modes / f));
    p.nonlinearity = {g, h, gamma};
    p.initial = InitialCondition::cosine_series(sp, phi);
    p.alpha = alpha;
    p.tol = tol;
    p.max_iter = max_iter;
    return p;
}

}  // namespace fspde
