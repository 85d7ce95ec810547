// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <numbers>

#include "levynmf/stable.hpp"
#include "levynmf/types.hpp"

namespace levynmf {

/// Levy NMF cost sum [WH]^2 / X - 2 log [WH], i.e. the IS divergence
/// d_IS([WH]^2, X) up to a data-only constant. Both X and [WH] are floored at
/// epsilon.
template <typename Scalar>
Scalar levy_cost(const Matrix<Scalar>& x, const FactorPair<Scalar>& f, Scalar eps) {
  require_factor_shape(x, f, "levy_cost");
  const Matrix<Scalar> v = f.W * f.H;
  const auto xf = x.array().max(eps);
  return (v.array().square() / xf - Scalar(2) * v.array().max(eps).log()).sum();
}

/// Log-likelihood of X under X(f,t) ~ Levy([WH](f,t)^2).
template <typename Scalar>
Scalar log_likelihood(const Matrix<Scalar>& x, const FactorPair<Scalar>& f, Scalar eps) {
  require_factor_shape(x, f, "log_likelihood");
  const Matrix<Scalar> v = (f.W * f.H).array().max(eps).matrix();
  Scalar total = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      total += levy_log_pdf<Scalar>(std::max(x(i, j), eps), v(i, j) * v(i, j));
    }
  }
  return total;
}

/// Half the squared Frobenius distance between X and WH.
template <typename Scalar>
Scalar euclidean_cost(const Matrix<Scalar>& x, const FactorPair<Scalar>& f) {
  require_factor_shape(x, f, "euclidean_cost");
  return Scalar(0.5) * (x - f.W * f.H).squaredNorm();
}

/// Generalized KL divergence d(X | WH) with 0 log 0 = 0.
template <typename Scalar>
Scalar kl_cost(const Matrix<Scalar>& x, const FactorPair<Scalar>& f, Scalar eps) {
  require_factor_shape(x, f, "kl_cost");
  const Matrix<Scalar> v = f.W * f.H;
  Scalar total = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Scalar a = x(i, j);
      const Scalar b = v(i, j);
      if (a > 0) total += a * std::log(std::max(a, eps) / std::max(b, eps));
      total += b - a;
    }
  }
  return total;
}

/// Itakura-Saito divergence d_IS(X | WH), optionally restricted to mask == 1 cells.
template <typename Scalar>
Scalar is_cost(const Matrix<Scalar>& x, const FactorPair<Scalar>& f, Scalar eps,
               const Matrix<Scalar>* mask = nullptr) {
  require_factor_shape(x, f, "is_cost");
  const Matrix<Scalar> v = f.W * f.H;
  Scalar total = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (mask && (*mask)(i, j) == 0) continue;
      const Scalar r = std::max(x(i, j), eps) / std::max(v(i, j), eps);
      total += r - std::log(r) - Scalar(1);
    }
  }
  return total;
}

}  // namespace levynmf
