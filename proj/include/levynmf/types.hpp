// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace levynmf {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

inline constexpr double kDefaultEpsilon = 1e-12;

/// Raised when a matrix has the wrong shape for an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for invalid fit/experiment configuration combinations.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for unreadable or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nonnegative factors of an F x T matrix: W is F x K, H is K x T.
template <typename Scalar>
struct FactorPair {
  Matrix<Scalar> W;
  Matrix<Scalar> H;

  Eigen::Index rank() const { return W.cols(); }
  Matrix<Scalar> product() const { return W * H; }
};

using FactorPairXd = FactorPair<double>;

template <typename Derived>
void require_nonnegative(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (m.size() == 0) {
    throw DimensionError(what + ": matrix is empty");
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto v = m(i, j);
      if (!(v >= 0) || !std::isfinite(static_cast<double>(v))) {
        throw std::domain_error(what + ": entry (" + std::to_string(i) + "," +
                                std::to_string(j) + ") is negative or not finite");
      }
    }
  }
}

template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(what + ": shape " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " does not match " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

/// Checks that the factors are compatible with an F x T data matrix.
template <typename Derived, typename Scalar>
void require_factor_shape(const Eigen::MatrixBase<Derived>& x, const FactorPair<Scalar>& f,
                          const std::string& what) {
  if (f.W.cols() != f.H.rows() || f.W.rows() != x.rows() || f.H.cols() != x.cols()) {
    throw DimensionError(what + ": factors " + std::to_string(f.W.rows()) + "x" +
                         std::to_string(f.W.cols()) + " * " + std::to_string(f.H.rows()) + "x" +
                         std::to_string(f.H.cols()) + " incompatible with data " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  }
}

}  // namespace levynmf
