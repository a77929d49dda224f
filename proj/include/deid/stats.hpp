#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "deid/random.hpp"

namespace deid {

struct BootstrapResult {
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and standard deviation of the resampled means. Throws EmptyInput.
BootstrapResult bootstrap_ci(std::span<const double> values, std::size_t resamples = 1000, Seed seed = 0);

// Two-sided exact binomial test: total probability of outcomes no more
// likely than k under Binomial(n, p).
double binomial_test_two_sided(std::uint64_t k, std::uint64_t n, double p);

// One-sample KS statistic of the samples against U(0, 1).
double ks_statistic_uniform(std::span<const double> samples);

// Asymptotic Kolmogorov p-value with the small-sample correction
// lambda = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) * d.
double kolmogorov_pvalue(double d, std::size_t n);

}  // namespace deid
