// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "levynmf/random.hpp"

namespace levynmf {

/// Positive alpha-stable law S(alpha, sigma, beta=1, mu=0) with 0 < alpha < 1.
///
/// sigma is the scale in the standard (Samorodnitsky-Taqqu) parametrization:
/// the Laplace transform is exp(-(sigma s)^alpha / cos(pi alpha / 2)), so that
/// independent sums combine as sigma^alpha = sum_k sigma_k^alpha and the
/// alpha = 1/2 member is the Levy law with scale sigma.
struct StableParams {
  double alpha;
  double sigma;

  StableParams(double alpha_, double sigma_) : alpha(alpha_), sigma(sigma_) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::domain_error("StableParams: alpha must lie in (0, 1), got " +
                              std::to_string(alpha));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw std::domain_error("StableParams: sigma must be positive, got " +
                              std::to_string(sigma));
    }
  }
};

namespace detail {
inline void require_positive_scale(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error(std::string(what) + ": sigma must be positive");
  }
}
}  // namespace detail

/// Levy density sqrt(sigma / 2pi) x^{-3/2} exp(-sigma / 2x), zero for x <= 0.
template <typename Scalar = double>
Scalar levy_pdf(Scalar x, Scalar sigma) {
  detail::require_positive_scale(static_cast<double>(sigma), "levy_pdf");
  if (!(x > 0)) return Scalar(0);
  using std::exp;
  using std::sqrt;
  return sqrt(sigma / (Scalar(2) * std::numbers::pi_v<Scalar>)) / (x * sqrt(x)) *
         exp(-sigma / (Scalar(2) * x));
}

/// Logarithm of the Levy density. Use this for likelihoods; levy_pdf
/// underflows far in the tail.
template <typename Scalar = double>
Scalar levy_log_pdf(Scalar x, Scalar sigma) {
  detail::require_positive_scale(static_cast<double>(sigma), "levy_log_pdf");
  if (!(x > 0)) {
    throw std::domain_error("levy_log_pdf: x must be positive (log-density is -inf)");
  }
  using std::log;
  return Scalar(0.5) * log(sigma) - Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>) -
         Scalar(1.5) * log(x) - sigma / (Scalar(2) * x);
}

/// Levy distribution function erfc(sqrt(sigma / 2x)).
template <typename Scalar = double>
Scalar levy_cdf(Scalar x, Scalar sigma) {
  detail::require_positive_scale(static_cast<double>(sigma), "levy_cdf");
  if (!(x > 0)) return Scalar(0);
  using std::erfc;
  using std::sqrt;
  return erfc(sqrt(sigma / (Scalar(2) * x)));
}

/// One Levy(sigma) draw as sigma / Z^2 with Z standard normal.
inline double sample_levy(double sigma, Rng& rng) {
  detail::require_positive_scale(sigma, "sample_levy");
  double z;
  do {
    z = rng.normal();
  } while (z == 0.0);
  return sigma / (z * z);
}

/// Natural log of one positive alpha-stable draw with scale exp(log_sigma).
///
/// Kanter's representation: Z = (a(U) / E)^{(1-alpha)/alpha} has Laplace transform
/// exp(-s^alpha), where
/// a(u) = sin((1-alpha) pi u) sin(alpha pi u)^{alpha/(1-alpha)} / sin(pi u)^{1/(1-alpha)},
/// U is uniform on (0,1) and E is unit exponential. The draw is
/// sigma cos(pi alpha / 2)^{-1/alpha} Z. Working in logs keeps small alpha usable,
/// where Z spans hundreds of decades.
inline double log_sample_pas(double alpha, double log_sigma, Rng& rng) {
  const double pi = std::numbers::pi;
  const double u = std::clamp(rng.uniform_open(), 1e-12, 1.0 - 1e-12);
  const double e = std::max(rng.exponential(), 1e-300);

  const double log_a = std::log(std::sin((1.0 - alpha) * pi * u)) +
                       alpha / (1.0 - alpha) * std::log(std::sin(alpha * pi * u)) -
                       std::log(std::sin(pi * u)) / (1.0 - alpha);
  const double log_z = (1.0 - alpha) / alpha * (log_a - std::log(e));
  return log_sigma - std::log(std::cos(pi * alpha / 2.0)) / alpha + log_z;
}

/// One positive alpha-stable draw; see log_sample_pas. Results outside the
/// double range are clamped to the smallest normal / largest finite value.
inline double sample_pas(const StableParams& params, Rng& rng) {
  const double v = std::exp(log_sample_pas(params.alpha, std::log(params.sigma), rng));
  return std::clamp(v, std::numeric_limits<double>::min(), std::numeric_limits<double>::max());
}

/// Scale of a sum of independent positive alpha-stable variables:
/// (sum_k sigma_k^alpha)^{1/alpha}.
inline double scale_of_sum(std::span<const double> sigmas, double alpha) {
  if (sigmas.empty()) {
    throw std::domain_error("scale_of_sum: empty sequence");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("scale_of_sum: alpha must lie in (0, 1)");
  }
  double acc = 0.0;
  for (double s : sigmas) {
    detail::require_positive_scale(s, "scale_of_sum");
    acc += std::pow(s, alpha);
  }
  return std::pow(acc, 1.0 / alpha);
}

}  // namespace levynmf
