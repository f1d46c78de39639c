#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fspde {

inline constexpr const char* kVersion = "0.3.1";

/// Raised when an argument lies outside the domain of an operation
/// (negative times, s >= t, Hurst index outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a configuration violates one of the standing hypotheses.
/// `hypothesis()` names the violated hypothesis, e.g. "(C)".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string hypothesis, const std::string& message)
        : std::runtime_error(message), hypothesis_(std::move(hypothesis)) {}

    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

/// Raised on numerical breakdown: failed factorizations, blow-up, non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Picard iteration did not reach tolerance; carries the successive-iterate distances.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& message, std::vector<double> history)
        : NumericalError(message), history_(std::move(history)) {}

    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent stream seed for `stream` under `master`. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// FNV-1a 64-bit hash, used for manifest and config fingerprints.
std::uint64_t fnv1a64(const std::string& bytes) noexcept;

std::string hex64(std::uint64_t value);

}  // namespace fspde
