// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "levynmf/types.hpp"

namespace levynmf {

/// Per-source scale fields. For alpha-stable sources these are the sigma_k^alpha
/// fields (W_k H_k for Levy NMF); callers raise to the power themselves.
template <typename Scalar>
using ComponentSet = std::vector<Matrix<Scalar>>;

/// The K rank-one terms W(:,k) H(k,:) of the factorization.
template <typename Scalar>
ComponentSet<Scalar> rank1_components(const FactorPair<Scalar>& f) {
  if (f.W.cols() != f.H.rows()) {
    throw DimensionError("rank1_components: inner dimensions disagree");
  }
  ComponentSet<Scalar> parts;
  parts.reserve(static_cast<std::size_t>(f.rank()));
  for (Eigen::Index k = 0; k < f.rank(); ++k) {
    parts.emplace_back(f.W.col(k) * f.H.row(k));
  }
  return parts;
}

/// Generalized Wiener filter: X_k = parts_k / sum_l parts_l * X.
///
/// Cells where the parts sum to less than eps are split evenly (mask 1/K), so the
/// estimates always add back up to X.
template <typename Scalar>
std::vector<Matrix<Scalar>> wiener_separate(const Matrix<Scalar>& x,
                                            const ComponentSet<Scalar>& parts, Scalar eps) {
  if (parts.empty()) throw DimensionError("wiener_separate: no components");
  for (const auto& p : parts) {
    require_same_shape(x, p, "wiener_separate");
    require_nonnegative(p, "wiener_separate: component");
  }
  Matrix<Scalar> total = Matrix<Scalar>::Zero(x.rows(), x.cols());
  for (const auto& p : parts) total += p;

  const Scalar uniform = Scalar(1) / static_cast<Scalar>(parts.size());
  std::vector<Matrix<Scalar>> out;
  out.reserve(parts.size());
  for (const auto& p : parts) {
    Matrix<Scalar> est(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Scalar mask = total(i, j) < eps ? uniform : p(i, j) / total(i, j);
        est(i, j) = mask * x(i, j);
      }
    }
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace levynmf
