#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fspde/greens.hpp"
#include "fspde/noise.hpp"
#include "fspde/solver.hpp"

namespace fspde {

/// Complete description of an experiment; every field has a default, so `{}` is a valid config.
struct ExperimentConfig {
    double horizon = 1.0;
    std::size_t n_steps = 256;
    std::size_t n_x = 256;
    std::size_t noise_modes = 16;   // N
    std::size_t kernel_modes = 128; // M
    double hurst = 0.75;
    double alpha = 0.3;
    CovarianceSpec covariance = CovarianceSpec::power_law(1.0, 3.0, 16);
    DiffusivitySpec diffusivity = DiffusivitySpec::constant(0.1);
    ScalarFunction g = ScalarFunction::sine(0.5, 1.0);
    ScalarFunction h = ScalarFunction::affine(0.2, 0.5);
    double gamma = 1.0;  // Hoelder exponent of h'; defaults to the value implied by h
    std::vector<double> phi = {1.0, 0.5, 0.25};  // cosine coefficients
    std::uint64_t seed = 20240601;
    std::size_t ensemble = 20;
    std::string method = "both";  // mild | galerkin | both
    FbmMethod fbm_method = FbmMethod::Circulant;
    double tol = 1e-6;
    std::size_t max_iter = 50;
    bool theorem_grade = true;
    double beta = 1.0;        // Hoelder exponent of the coefficients in time
    std::vector<double> deltas = {0.4, 0.5, 0.7};
    double epsilon = 0.25;
    std::size_t sample_time_steps = 128;
    std::size_t sample_count = 10000;
    std::size_t bound_paths = 100;
    std::size_t bound_seeds = 20;
    std::string output = "out";

    /// Throws ConfigError on malformed input or unknown keys.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    /// fnv1a64 of the canonical (sorted-key) JSON form.
    std::uint64_t hash() const;

    HypothesisInputs hypothesis_inputs() const;
    /// Structural checks plus the hypotheses every solve needs; theorem-grade runs also
    /// need (I), (H_gamma) and Theorem (a). Throws ConfigError naming the first violation.
    HypothesisReport validate() const;

    TimeGrid time_grid() const { return TimeGrid(horizon, n_steps); }
    SpatialGridPtr space() const { return SpatialGrid::uniform(n_x); }
    NoiseField noise(SpatialGridPtr space, std::uint64_t seed) const;
    std::shared_ptr<const SpectralKernel> kernel(SpatialGridPtr space) const;
    Problem problem(std::uint64_t seed) const;
    /// Same problem on a grid coarsened by 2^level in (n_steps, n_x, N, M); the noise is
    /// the restriction of `finest`.
    Problem coarsened_problem(const NoiseField& finest, std::size_t level) const;
};

}  // namespace fspde
