// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "levynmf/random.hpp"
#include "levynmf/types.hpp"

namespace levynmf {

enum class Model { Levy, KL, IS, Euclidean, WeightedIS };
enum class Rule { MUR, MM };

inline std::string to_string(Model m) {
  switch (m) {
    case Model::Levy: return "levy";
    case Model::KL: return "kl";
    case Model::IS: return "is";
    case Model::Euclidean: return "euclidean";
    case Model::WeightedIS: return "weighted_is";
  }
  return "?";
}

inline std::string to_string(Rule r) { return r == Rule::MM ? "mm" : "mur"; }

namespace detail {

/// theta <- max(theta * ratio^p, eps) with ratio = num / max(den, eps), p in {1, 1/2}.
/// A ratio whose numerator and denominator both fall below eps is taken as 1.
template <typename Scalar>
void multiplicative_update(Matrix<Scalar>& theta, const Matrix<Scalar>& num,
                           const Matrix<Scalar>& den, Scalar eps, bool half_power) {
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      const Scalar n = num(i, j);
      const Scalar d = den(i, j);
      Scalar r = (n < eps && d < eps) ? Scalar(1) : n / std::max(d, eps);
      if (half_power) r = std::sqrt(r);
      theta(i, j) = std::max(theta(i, j) * r, eps);
    }
  }
}

/// Elementwise numerator/denominator fields of the split gradient w.r.t. [WH].
/// The W ratio is (P H^T) / (Q H^T) and the H ratio is (W^T P) / (W^T Q).
template <typename Scalar>
struct GradientFields {
  Matrix<Scalar> P;
  Matrix<Scalar> Q;
};

template <typename Scalar>
GradientFields<Scalar> gradient_fields(Model model, const Matrix<Scalar>& x,
                                       const FactorPair<Scalar>& f, Scalar eps,
                                       const Matrix<Scalar>* mask) {
  if (model == Model::WeightedIS && mask == nullptr) {
    throw ConfigError("weighted IS update requires a mask");
  }
  const Matrix<Scalar> v = (f.W * f.H).array().max(eps).matrix();
  GradientFields<Scalar> g;
  switch (model) {
    case Model::Levy:
      g.P = v.array().inverse().matrix();
      g.Q = (v.array() / x.array().max(eps)).matrix();
      break;
    case Model::Euclidean:
      g.P = x;
      g.Q = v;
      break;
    case Model::KL:
      g.P = (x.array() / v.array()).matrix();
      g.Q = Matrix<Scalar>::Ones(x.rows(), x.cols());
      break;
    case Model::IS:
      g.P = (x.array() / v.array().square()).matrix();
      g.Q = v.array().inverse().matrix();
      break;
    case Model::WeightedIS:
      g.P = (mask->array() * x.array() / v.array().square()).matrix();
      g.Q = (mask->array() / v.array()).matrix();
      break;
  }
  return g;
}

}  // namespace detail

/// One multiplicative update of W with H fixed.
template <typename Scalar>
void update_w(Model model, Rule rule, const Matrix<Scalar>& x, FactorPair<Scalar>& f, Scalar eps,
              const Matrix<Scalar>* mask = nullptr) {
  const auto g = detail::gradient_fields(model, x, f, eps, mask);
  const Matrix<Scalar> ht = f.H.transpose();
  detail::multiplicative_update<Scalar>(f.W, g.P * ht, g.Q * ht, eps, rule == Rule::MM);
}

/// One multiplicative update of H with W fixed.
template <typename Scalar>
void update_h(Model model, Rule rule, const Matrix<Scalar>& x, FactorPair<Scalar>& f, Scalar eps,
              const Matrix<Scalar>* mask = nullptr) {
  const auto g = detail::gradient_fields(model, x, f, eps, mask);
  const Matrix<Scalar> wt = f.W.transpose();
  detail::multiplicative_update<Scalar>(f.H, wt * g.P, wt * g.Q, eps, rule == Rule::MM);
}

/// Validates a {0,1} mask against the data shape.
template <typename Scalar>
void require_mask(const Matrix<Scalar>& x, const Matrix<Scalar>& mask) {
  require_same_shape(x, mask, "mask");
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) != 0 && mask(i, j) != 1) {
        throw std::domain_error("mask: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not 0 or 1");
      }
    }
  }
}

/// Naive multiplicative update for Levy NMF: W <- W a_W, then H <- H a_H.
template <typename Scalar>
FactorPair<Scalar> mur_step_levy(const Matrix<Scalar>& x, FactorPair<Scalar> f, Scalar eps) {
  require_factor_shape(x, f, "mur_step_levy");
  update_w(Model::Levy, Rule::MUR, x, f, eps);
  update_h(Model::Levy, Rule::MUR, x, f, eps);
  return f;
}

/// Majorize-minimization update for Levy NMF: W <- W a_W^{1/2}, then H <- H a_H^{1/2}.
/// The cost sum [WH]^2/X - 2 log [WH] never increases.
template <typename Scalar>
FactorPair<Scalar> mm_step_levy(const Matrix<Scalar>& x, FactorPair<Scalar> f, Scalar eps) {
  require_factor_shape(x, f, "mm_step_levy");
  update_w(Model::Levy, Rule::MM, x, f, eps);
  update_h(Model::Levy, Rule::MM, x, f, eps);
  return f;
}

/// Standard multiplicative update for the Euclidean, KL and IS baselines (X ~ WH).
template <typename Scalar>
FactorPair<Scalar> baseline_step(Model model, const Matrix<Scalar>& x, FactorPair<Scalar> f,
                                 Scalar eps) {
  if (model != Model::KL && model != Model::IS && model != Model::Euclidean) {
    throw ConfigError("baseline_step: model must be kl, is or euclidean");
  }
  require_factor_shape(x, f, "baseline_step");
  update_w(model, Rule::MUR, x, f, eps);
  update_h(model, Rule::MUR, x, f, eps);
  return f;
}

/// IS update restricted to trusted cells (mask == 1).
template <typename Scalar>
FactorPair<Scalar> weighted_is_step(const Matrix<Scalar>& x, const Matrix<Scalar>& mask,
                                    FactorPair<Scalar> f, Scalar eps) {
  require_factor_shape(x, f, "weighted_is_step");
  require_mask(x, mask);
  update_w(Model::WeightedIS, Rule::MUR, x, f, eps, &mask);
  update_h(Model::WeightedIS, Rule::MUR, x, f, eps, &mask);
  return f;
}

/// W (F x K) and H (K x T) with i.i.d. entries uniform on (eps, 1]. W is filled
/// row by row, then H.
template <typename Scalar = double>
FactorPair<Scalar> init_factors(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                std::uint64_t seed, Scalar eps = Scalar(kDefaultEpsilon)) {
  if (rows < 1 || cols < 1 || rank < 1) {
    throw DimensionError("init_factors: dimensions must be positive");
  }
  Rng rng(seed);
  auto draw = [&] { return eps + (Scalar(1) - eps) * Scalar(1.0 - rng.uniform()); };
  FactorPair<Scalar> f{Matrix<Scalar>(rows, rank), Matrix<Scalar>(rank, cols)};
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < rank; ++k) f.W(i, k) = draw();
  for (Eigen::Index k = 0; k < rank; ++k)
    for (Eigen::Index j = 0; j < cols; ++j) f.H(k, j) = draw();
  return f;
}

}  // namespace levynmf
