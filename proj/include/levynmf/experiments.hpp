// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "levynmf/fit.hpp"
#include "levynmf/types.hpp"

namespace levynmf {

// ---------------------------------------------------------------------------
// Impulsive-noise benchmark

/// W and H with entries g^4, g standard normal (sparse, heavy-tailed).
FactorPairXd gen_sparse_factors(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                std::uint64_t seed);

/// Natural log of the scale field sigma = (WH)^{1/alpha}.
MatrixXd log_scale_field(const MatrixXd& wh, double alpha, double eps = kDefaultEpsilon);

/// Independent positive alpha-stable observations with scale sigma = (WH)^{1/alpha}.
MatrixXd gen_pas_observations(const FactorPairXd& factors, double alpha, std::uint64_t seed);

struct BenchConfig {
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5};
  Eigen::Index rows = 50;
  Eigen::Index cols = 50;
  Eigen::Index rank = 5;
  int iterations = 200;
  int runs = 100;
  std::uint64_t seed = 0;
};

/// One (algorithm, alpha, run) record. Metrics are stored as base-10 logarithms
/// because for small alpha they exceed the double range.
struct BenchResult {
  std::string algorithm;
  double alpha = 0;
  int run = 0;
  double log10_alpha_dispersion = 0;
  double log10_kl = 0;
  std::uint64_t seed = 0;
};

struct BenchSummary {
  std::string algorithm;
  double alpha = 0;
  /// log10 of the arithmetic means over runs.
  double log10_mean_alpha_dispersion = 0;
  double log10_mean_kl = 0;
  int runs = 0;
};

/// Algorithms compared in the benchmark, in canonical output order.
std::vector<std::string> bench_algorithms();

/// Fits Levy/MM, KL, IS and Euclidean NMF to each synthetic instance and
/// compares true and estimated sigma fields. Sorted by (algorithm, alpha, run).
std::vector<BenchResult> run_impulsive_bench(const BenchConfig& config);

std::vector<BenchSummary> summarize_bench(const std::vector<BenchResult>& results);

/// Formats 10^log10_value in scientific notation, beyond the double range if needed.
std::string format_pow10(double log10_value);

/// Header `algorithm,alpha,run,alpha_dispersion,kl,seed`; metric columns hold the
/// plain values written in scientific notation.
void write_bench_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path);

void write_bench_summary_csv(const std::vector<BenchSummary>& summary,
                             const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Spectrogram inpainting

/// Sum of 3-8 harmonic combs with decaying envelopes and slight vibrato, a
/// -60 dB floor and Rayleigh speckle. Strictly positive.
MatrixXd gen_harmonic_spectrogram(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

struct Corruption {
  MatrixXd corrupted;
  MatrixXd mask;  // 0 at corrupted cells, 1 elsewhere
};

/// Replaces floor(fraction * F * T) cells, chosen without replacement, by
/// s * u with s = 100 x the 95th percentile of X and u ~ Uniform(0.5, 1.5).
Corruption corrupt_impulsive(const MatrixXd& x, double fraction, std::uint64_t seed);

/// Linear-interpolation percentile of all entries, q in [0, 1].
double percentile(const MatrixXd& x, double q);

struct InpaintConfig {
  double fraction = 0.1;
  Eigen::Index rank = 30;
  int iterations = 200;
  std::uint64_t seed = 0;
};

struct InpaintScore {
  std::string algorithm;
  double log_kl = 0;
};

struct InpaintReport {
  /// levy, is, kl (blind) and weighted_is (given the true mask).
  std::vector<InpaintScore> scores;
  /// (WH)^2 from the Levy fit.
  MatrixXd levy_estimate;

  double score(const std::string& algorithm) const;
};

InpaintReport run_inpaint_experiment(const MatrixXd& clean, const InpaintConfig& config);

void write_inpaint_report_csv(const InpaintReport& report, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Fluorescence unmixing

struct FluorMixture {
  MatrixXd x;               // F x T observed mixtures
  MatrixXd spectra;         // F x K pure spectra
  MatrixXd concentrations;  // K x T
};

/// Pure spectra made of 1-3 Gaussian bumps, uniform concentrations, and additive
/// half-normal noise at 1% of the mean noiseless intensity.
FluorMixture gen_fluorescence_mixture(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                      std::uint64_t seed);

struct FluorConfig {
  Eigen::Index rows = 128;
  Eigen::Index cols = 400;
  Eigen::Index rank = 3;
  int iterations = 50;
  /// Update used for the Levy fit; MM is the multiplicative rule with the
  /// monotonicity guarantee.
  Rule levy_rule = Rule::MM;
  std::uint64_t seed = 0;
};

struct FluorReport {
  std::vector<std::string> algorithms;  // euclidean, kl, levy
  /// algorithms x sources correlation between estimated and Oracle sources.
  MatrixXd correlations;
};

/// For each reference column, the index of the estimated column matched by greedy
/// maximal correlation without replacement.
std::vector<Eigen::Index> greedy_match(const MatrixXd& estimated, const MatrixXd& reference);

FluorReport run_fluor_experiment(const FluorConfig& config);

void write_fluor_report_csv(const FluorReport& report, const std::filesystem::path& path);

}  // namespace levynmf
