// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "levynmf/cost.hpp"
#include "levynmf/updates.hpp"

namespace levynmf {

struct FitConfig {
  Model model = Model::Levy;
  Rule rule = Rule::MM;
  Eigen::Index rank = 5;
  int iterations = 200;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;
  /// {0,1} trust mask; required by (and only valid for) WeightedIS.
  std::optional<MatrixXd> mask;
  /// Stop once the relative cost change drops below this value. Off by default so
  /// that traces always have `iterations` entries.
  std::optional<double> tolerance;
};

struct FitTrace {
  std::vector<double> costs;
  Model model = Model::Levy;
  Rule rule = Rule::MM;
};

/// Throws ConfigError unless the configuration is usable on data of the given shape.
inline void validate(const FitConfig& c, Eigen::Index rows, Eigen::Index cols) {
  if (c.rank < 1) throw ConfigError("rank must be a positive integer");
  if (c.iterations < 1) throw ConfigError("iterations must be a positive integer");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (c.rule == Rule::MM && c.model != Model::Levy) {
    throw ConfigError("the MM rule is only defined for the levy model");
  }
  if (c.model == Model::WeightedIS) {
    if (!c.mask) throw ConfigError("weighted_is requires a mask");
    if (c.mask->rows() != rows || c.mask->cols() != cols) {
      throw ConfigError("mask shape does not match the data");
    }
  } else if (c.mask) {
    throw ConfigError("a mask is only valid for the weighted_is model");
  }
  if (c.tolerance && !(*c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
}

/// The objective each model minimizes, as recorded in the fit trace.
template <typename Scalar>
Scalar model_cost(Model model, const Matrix<Scalar>& x, const FactorPair<Scalar>& f, Scalar eps,
                  const Matrix<Scalar>* mask = nullptr) {
  switch (model) {
    case Model::Levy: return levy_cost(x, f, eps);
    case Model::KL: return kl_cost(x, f, eps);
    case Model::IS: return is_cost(x, f, eps);
    case Model::Euclidean: return euclidean_cost(x, f);
    case Model::WeightedIS: return is_cost(x, f, eps, mask);
  }
  return Scalar(0);
}

/// One full sweep (W then H) of the configured update.
template <typename Scalar>
void sweep(Model model, Rule rule, const Matrix<Scalar>& x, FactorPair<Scalar>& f, Scalar eps,
           const Matrix<Scalar>* mask = nullptr) {
  update_w(model, rule, x, f, eps, mask);
  update_h(model, rule, x, f, eps, mask);
}

/// Runs the configured updates starting from the given factors.
inline std::pair<FactorPairXd, FitTrace> fit_from(const MatrixXd& x, const FitConfig& config,
                                                  FactorPairXd factors) {
  require_nonnegative(x, "fit: data");
  validate(config, x.rows(), x.cols());
  require_factor_shape(x, factors, "fit");
  if (config.mask) require_mask(x, *config.mask);

  const MatrixXd* mask = config.mask ? &*config.mask : nullptr;
  FitTrace trace;
  trace.model = config.model;
  trace.rule = config.rule;
  trace.costs.reserve(static_cast<std::size_t>(config.iterations));
  for (int it = 0; it < config.iterations; ++it) {
    sweep(config.model, config.rule, x, factors, config.epsilon, mask);
    trace.costs.push_back(model_cost(config.model, x, factors, config.epsilon, mask));
    if (config.tolerance && trace.costs.size() >= 2) {
      const double prev = trace.costs[trace.costs.size() - 2];
      if (std::abs(prev - trace.costs.back()) <= *config.tolerance * std::abs(prev)) break;
    }
  }
  return {std::move(factors), std::move(trace)};
}

/// Seeded initialization followed by `iterations` sweeps. For the Levy model the
/// product WH estimates sigma^{1/2}, i.e. [WH]^2 ~ X; every other model fits WH ~ X.
inline std::pair<FactorPairXd, FitTrace> fit(const MatrixXd& x, const FitConfig& config) {
  require_nonnegative(x, "fit: data");
  validate(config, x.rows(), x.cols());
  return fit_from(x, config, init_factors<double>(x.rows(), x.cols(), config.rank, config.seed,
                                                  config.epsilon));
}

}  // namespace levynmf
