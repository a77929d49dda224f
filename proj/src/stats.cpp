#include "deid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "deid/error.hpp"

namespace deid {

BootstrapResult bootstrap_ci(std::span<const double> values, std::size_t resamples, Seed seed) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "bootstrap of an empty sample");
  if (resamples == 0) throw Error(ErrorCode::InvalidArgument, "resamples must be positive");
  const std::size_t n = values.size();
  std::vector<double> means(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    const Seed rs = derive_seed(seed, r);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(uniform_at(rs, i) * static_cast<double>(n));
      acc += values[std::min(j, n - 1)];
    }
    means[r] = acc / static_cast<double>(n);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(resamples);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var = resamples > 1 ? var / static_cast<double>(resamples - 1) : 0.0;
  return {mean, std::sqrt(var)};
}

double binomial_test_two_sided(std::uint64_t k, std::uint64_t n, double p) {
  if (k > n) throw Error(ErrorCode::InvalidArgument, "k exceeds n");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p outside [0, 1]");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  const double pk = boost::math::pdf(dist, static_cast<double>(k));
  const double limit = pk * (1.0 + 1e-7);
  double total = 0.0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    const double pi = boost::math::pdf(dist, static_cast<double>(i));
    if (pi <= limit) total += pi;
  }
  return std::min(total, 1.0);
}

double ks_statistic_uniform(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "KS statistic of an empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const auto n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = std::clamp(s[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_pvalue(double d, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyInput, "KS p-value needs n > 0");
  if (d <= 0.0) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace deid
