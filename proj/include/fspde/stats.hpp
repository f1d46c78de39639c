#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fspde::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double median(std::vector<double> x);

struct CovarianceEstimate {
    double value;           // sample covariance (centered)
    double standard_error;  // from the sample variance of the centered products
};

/// Sample covariance of paired draws with its Monte-Carlo standard error.
CovarianceEstimate covariance(std::span<const double> x, std::span<const double> y);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic;
    double p_value;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope;
    double intercept;
    double r2;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace fspde::stats
