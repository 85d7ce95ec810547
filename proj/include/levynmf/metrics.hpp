// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levynmf/types.hpp"

namespace levynmf {

struct MetricReport {
  std::string name;
  double value = 0.0;
  std::map<std::string, double> params;
};

/// Generalized KL divergence sum A log(A/B) - A + B, with 0 log 0 = 0.
template <typename Scalar>
Scalar gkl_divergence(const Matrix<Scalar>& a, const Matrix<Scalar>& b, Scalar eps) {
  require_same_shape(a, b, "gkl_divergence");
  Scalar total = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Scalar x = a(i, j);
      const Scalar y = b(i, j);
      if (x > 0) total += x * std::log(std::max(x, eps) / std::max(y, eps));
      total += y - x;
    }
  }
  return std::max(total, Scalar(0));
}

/// alpha-dispersion sum |sigma - sigma_hat|^{1/alpha}.
template <typename Scalar>
Scalar alpha_dispersion(const Matrix<Scalar>& sigma, const Matrix<Scalar>& sigma_hat,
                        Scalar alpha) {
  require_same_shape(sigma, sigma_hat, "alpha_dispersion");
  if (!(alpha > 0 && alpha < 1)) throw std::domain_error("alpha_dispersion: alpha not in (0,1)");
  return (sigma - sigma_hat).array().abs().pow(Scalar(1) / alpha).sum();
}

/// Natural log of the generalized KL divergence, floored at eps.
template <typename Scalar>
Scalar log_kl(const Matrix<Scalar>& a, const Matrix<Scalar>& b, Scalar eps) {
  return std::log(std::max(gkl_divergence(a, b, eps), eps));
}

/// Pearson correlation coefficient.
inline double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("correlation: length mismatch");
  if (a.size() < 2) throw DimensionError("correlation: need at least two samples");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) throw std::domain_error("correlation: zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Correlation of two matrices over their flattened entries.
inline double correlation(const MatrixXd& a, const MatrixXd& b) {
  require_same_shape(a, b, "correlation");
  return correlation(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                     std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

// Log-domain evaluation.
//
// The impulsive-noise benchmark compares sigma = (WH)^{1/alpha} fields; for
// alpha = 0.1 these and their dispersions leave the double range by thousands of
// decades. The functions below take natural logs of the fields and return the
// natural log of the metric.

/// log(sum_i exp(v_i)); -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

/// log |e^a - e^b|.
inline double log_abs_diff(double a, double b) {
  if (a == b) return -std::numeric_limits<double>::infinity();
  const double hi = std::max(a, b);
  const double d = std::abs(a - b);
  return hi + std::log(-std::expm1(-d));
}

/// log(r - 1 - log r) for r = e^{lr}; the per-unit-mass generalized KL term.
inline double log_kl_kernel(double lr) {
  if (lr > 30.0) return lr + std::log1p(-(1.0 + lr) * std::exp(-lr));
  double phi;
  if (std::abs(lr) < 1e-3) {
    phi = lr * lr * (0.5 + lr * (1.0 / 6.0 + lr / 24.0));
  } else {
    phi = std::expm1(lr) - lr;
  }
  return phi > 0 ? std::log(phi) : -std::numeric_limits<double>::infinity();
}

/// log of alpha_dispersion(exp(log_sigma), exp(log_sigma_hat), alpha).
inline double log_alpha_dispersion(const MatrixXd& log_sigma, const MatrixXd& log_sigma_hat,
                                   double alpha) {
  require_same_shape(log_sigma, log_sigma_hat, "log_alpha_dispersion");
  if (!(alpha > 0 && alpha < 1)) throw std::domain_error("log_alpha_dispersion: alpha not in (0,1)");
  std::vector<double> terms(static_cast<std::size_t>(log_sigma.size()));
  for (Eigen::Index i = 0; i < log_sigma.size(); ++i) {
    terms[static_cast<std::size_t>(i)] = log_abs_diff(log_sigma(i), log_sigma_hat(i)) / alpha;
  }
  return log_sum_exp(terms);
}

/// log of gkl_divergence(exp(log_a), exp(log_b)) for strictly positive fields.
inline double log_gkl_divergence(const MatrixXd& log_a, const MatrixXd& log_b) {
  require_same_shape(log_a, log_b, "log_gkl_divergence");
  std::vector<double> terms(static_cast<std::size_t>(log_a.size()));
  for (Eigen::Index i = 0; i < log_a.size(); ++i) {
    terms[static_cast<std::size_t>(i)] = log_a(i) + log_kl_kernel(log_b(i) - log_a(i));
  }
  return log_sum_exp(terms);
}

}  // namespace levynmf
