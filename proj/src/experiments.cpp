// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "levynmf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <tuple>

#include "levynmf/metrics.hpp"
#include "levynmf/random.hpp"
#include "levynmf/separation.hpp"
#include "levynmf/signal_io.hpp"
#include "levynmf/stable.hpp"

namespace levynmf {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

struct Algorithm {
  std::string name;
  Model model;
  Rule rule;
};

}  // namespace

FactorPairXd gen_sparse_factors(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                std::uint64_t seed) {
  if (rows < 1 || cols < 1 || rank < 1) throw DimensionError("gen_sparse_factors: bad dimensions");
  Rng rng(seed);
  auto draw = [&] {
    const double g = rng.normal();
    return (g * g) * (g * g);
  };
  FactorPairXd f{MatrixXd(rows, rank), MatrixXd(rank, cols)};
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < rank; ++k) f.W(i, k) = draw();
  for (Eigen::Index k = 0; k < rank; ++k)
    for (Eigen::Index j = 0; j < cols; ++j) f.H(k, j) = draw();
  return f;
}

MatrixXd log_scale_field(const MatrixXd& wh, double alpha, double eps) {
  return (wh.array().max(eps).log() / alpha).matrix();
}

MatrixXd gen_pas_observations(const FactorPairXd& factors, double alpha, std::uint64_t seed) {
  if (!(alpha > 0 && alpha < 1)) throw std::domain_error("gen_pas_observations: alpha not in (0,1)");
  const MatrixXd log_sigma = log_scale_field(factors.product(), alpha);
  Rng rng(seed);
  MatrixXd x(log_sigma.rows(), log_sigma.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double v = std::exp(log_sample_pas(alpha, log_sigma(i, j), rng));
      x(i, j) = std::clamp(v, std::numeric_limits<double>::min(), std::numeric_limits<double>::max());
    }
  }
  return x;
}

std::vector<std::string> bench_algorithms() { return {"euclidean", "is", "kl", "levy"}; }

std::vector<BenchResult> run_impulsive_bench(const BenchConfig& config) {
  if (config.alphas.empty()) throw ConfigError("bench: empty alpha grid");
  for (double a : config.alphas) {
    if (!(a > 0 && a < 1)) throw ConfigError("bench: every alpha must lie in (0, 1)");
  }
  if (config.runs < 1) throw ConfigError("bench: runs must be positive");

  const std::vector<Algorithm> algorithms{{"euclidean", Model::Euclidean, Rule::MUR},
                                          {"is", Model::IS, Rule::MUR},
                                          {"kl", Model::KL, Rule::MUR},
                                          {"levy", Model::Levy, Rule::MM}};
  std::vector<BenchResult> results;
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    const double alpha = config.alphas[ai];
    for (int run = 0; run < config.runs; ++run) {
      const std::uint64_t run_seed = derive_seed(config.seed, 0xB3, ai, static_cast<std::uint64_t>(run));
      const FactorPairXd truth =
          gen_sparse_factors(config.rows, config.cols, config.rank, derive_seed(run_seed, 1));
      const MatrixXd x = gen_pas_observations(truth, alpha, derive_seed(run_seed, 2));
      const MatrixXd log_sigma = log_scale_field(truth.product(), alpha);

      for (const auto& alg : algorithms) {
        FitConfig fc;
        fc.model = alg.model;
        fc.rule = alg.rule;
        fc.rank = config.rank;
        fc.iterations = config.iterations;
        fc.seed = derive_seed(run_seed, 3);
        const auto [est, trace] = fit(x, fc);
        const MatrixXd log_sigma_hat = log_scale_field(est.product(), alpha);

        BenchResult r;
        r.algorithm = alg.name;
        r.alpha = alpha;
        r.run = run;
        r.seed = run_seed;
        const double ln10 = std::numbers::ln10;
        r.log10_alpha_dispersion = log_alpha_dispersion(log_sigma, log_sigma_hat, alpha) / ln10;
        r.log10_kl =
            std::max(log_gkl_divergence(log_sigma, log_sigma_hat), std::log(kDefaultEpsilon)) / ln10;
        results.push_back(std::move(r));
      }
    }
  }
  std::sort(results.begin(), results.end(), [](const BenchResult& a, const BenchResult& b) {
    return std::tie(a.algorithm, a.alpha, a.run) < std::tie(b.algorithm, b.alpha, b.run);
  });
  return results;
}

std::vector<BenchSummary> summarize_bench(const std::vector<BenchResult>& results) {
  std::map<std::pair<std::string, double>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : results) {
    auto& g = groups[{r.algorithm, r.alpha}];
    g.first.push_back(r.log10_alpha_dispersion * std::numbers::ln10);
    g.second.push_back(r.log10_kl * std::numbers::ln10);
  }
  std::vector<BenchSummary> out;
  for (const auto& [key, g] : groups) {
    const double log_n = std::log(static_cast<double>(g.first.size()));
    BenchSummary s;
    s.algorithm = key.first;
    s.alpha = key.second;
    s.runs = static_cast<int>(g.first.size());
    s.log10_mean_alpha_dispersion = (log_sum_exp(g.first) - log_n) / std::numbers::ln10;
    s.log10_mean_kl = (log_sum_exp(g.second) - log_n) / std::numbers::ln10;
    out.push_back(s);
  }
  return out;
}

std::string format_pow10(double log10_value) {
  if (std::isnan(log10_value)) return "nan";
  if (log10_value == -std::numeric_limits<double>::infinity()) return "0";
  if (log10_value == std::numeric_limits<double>::infinity()) return "inf";
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14f", mantissa);
  if (buf[0] == '1' && buf[1] == '0') {  // rounded up to 10.000...
    mantissa /= 10.0;
    exponent += 1.0;
    std::snprintf(buf, sizeof buf, "%.14f", mantissa);
  }
  char out[96];
  std::snprintf(out, sizeof out, "%se%+d", buf, static_cast<int>(exponent));
  return out;
}

void write_bench_csv(const std::vector<BenchResult>& results, const std::filesystem::path& path) {
  auto f = open_for_write(path);
  f << "algorithm,alpha,run,alpha_dispersion,kl,seed\n";
  for (const auto& r : results) {
    f << r.algorithm << ',' << format_real(r.alpha) << ',' << r.run << ','
      << format_pow10(r.log10_alpha_dispersion) << ',' << format_pow10(r.log10_kl) << ','
      << r.seed << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

void write_bench_summary_csv(const std::vector<BenchSummary>& summary,
                             const std::filesystem::path& path) {
  auto f = open_for_write(path);
  f << "algorithm,alpha,runs,mean_alpha_dispersion,mean_kl,log10_mean_alpha_dispersion,log10_mean_kl\n";
  for (const auto& s : summary) {
    f << s.algorithm << ',' << format_real(s.alpha) << ',' << s.runs << ','
      << format_pow10(s.log10_mean_alpha_dispersion) << ',' << format_pow10(s.log10_mean_kl) << ','
      << format_real(s.log10_mean_alpha_dispersion) << ',' << format_real(s.log10_mean_kl) << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------

MatrixXd gen_harmonic_spectrogram(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  if (rows < 16 || cols < 24) throw DimensionError("gen_harmonic_spectrogram: need at least 16 x 24");
  Rng rng(seed);
  const double pi = std::numbers::pi;
  MatrixXd x = MatrixXd::Zero(rows, cols);
  const int notes = 3 + static_cast<int>(rng.below(6));
  const double f_rows = static_cast<double>(rows);
  const double f_cols = static_cast<double>(cols);
  for (int n = 0; n < notes; ++n) {
    const double f0 = rng.uniform(f_rows / 60.0 + 2.0, f_rows / 12.0 + 2.0);
    const double width = rng.uniform(0.6, 1.5);
    const double gain = rng.uniform(0.5, 2.0);
    const auto onset = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(cols - 20)));
    const auto duration =
        20 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(cols - onset - 20 + 1)));
    const double decay = rng.uniform(f_cols / 20.0, f_cols / 3.0);
    const double depth = rng.uniform(0.0, 0.01);
    const double period = rng.uniform(15.0, 40.0);
    const double phase = rng.uniform(0.0, 2.0 * pi);

    std::vector<double> partial_gain;
    for (int h = 1; h * f0 < f_rows - 1.0 && h <= 40; ++h) {
      partial_gain.push_back(rng.uniform(0.5, 1.0) / h);
    }
    for (Eigen::Index t = onset; t < std::min(cols, onset + duration); ++t) {
      const double dt = static_cast<double>(t - onset);
      const double env = std::exp(-dt / decay) * std::min(1.0, (dt + 1.0) / 2.0);
      const double bend = 1.0 + depth * std::sin(2.0 * pi * static_cast<double>(t) / period + phase);
      for (std::size_t h = 0; h < partial_gain.size(); ++h) {
        const double centre = static_cast<double>(h + 1) * f0 * bend;
        const auto lo = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(centre - 6 * width));
        const auto hi = std::min<Eigen::Index>(rows - 1, static_cast<Eigen::Index>(centre + 6 * width) + 1);
        for (Eigen::Index f = lo; f <= hi; ++f) {
          const double d = (static_cast<double>(f) - centre) / width;
          x(f, t) += gain * partial_gain[h] * env * std::exp(-0.5 * d * d);
        }
      }
    }
  }
  x.array() += 1e-3 * x.maxCoeff();
  // Rayleigh speckle with unit mean square, as for STFT magnitudes of noisy signals.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      x(i, j) *= std::max(std::sqrt(rng.exponential()), 1e-6);
    }
  }
  return x;
}

double percentile(const MatrixXd& x, double q) {
  if (x.size() == 0) throw DimensionError("percentile: empty matrix");
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Corruption corrupt_impulsive(const MatrixXd& x, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("corrupt_impulsive: fraction must lie in (0, 1)");
  }
  require_nonnegative(x, "corrupt_impulsive");
  const auto cells = static_cast<std::size_t>(x.size());
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(cells)));
  const double level = 100.0 * percentile(x, 0.95);

  Rng rng(seed);
  std::vector<std::size_t> index(cells);
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(cells - i));
    std::swap(index[i], index[j]);
  }

  Corruption c{x, MatrixXd::Ones(x.rows(), x.cols())};
  for (std::size_t i = 0; i < count; ++i) {
    const auto lin = static_cast<Eigen::Index>(index[i]);
    c.corrupted(lin) = level * rng.uniform(0.5, 1.5);
    c.mask(lin) = 0.0;
  }
  return c;
}

double InpaintReport::score(const std::string& algorithm) const {
  for (const auto& s : scores) {
    if (s.algorithm == algorithm) return s.log_kl;
  }
  throw std::out_of_range("no score for " + algorithm);
}

InpaintReport run_inpaint_experiment(const MatrixXd& clean, const InpaintConfig& config) {
  require_nonnegative(clean, "inpaint: spectrogram");
  if (!(config.fraction >= 0.0 && config.fraction < 1.0)) {
    throw ConfigError("inpaint: fraction must lie in [0, 1)");
  }
  Corruption data{clean, MatrixXd::Ones(clean.rows(), clean.cols())};
  if (config.fraction > 0.0) {
    data = corrupt_impulsive(clean, config.fraction, derive_seed(config.seed, 0xC0));
  }

  const std::vector<Algorithm> algorithms{{"levy", Model::Levy, Rule::MM},
                                          {"is", Model::IS, Rule::MUR},
                                          {"kl", Model::KL, Rule::MUR},
                                          {"weighted_is", Model::WeightedIS, Rule::MUR}};
  InpaintReport report;
  for (const auto& alg : algorithms) {
    FitConfig fc;
    fc.model = alg.model;
    fc.rule = alg.rule;
    fc.rank = config.rank;
    fc.iterations = config.iterations;
    fc.seed = derive_seed(config.seed, 0x1A);
    if (alg.model == Model::WeightedIS) fc.mask = data.mask;
    const auto [est, trace] = fit(data.corrupted, fc);

    MatrixXd estimate = est.product();
    if (alg.model == Model::Levy) {
      estimate = estimate.array().square().matrix();
      report.levy_estimate = estimate;
    }
    report.scores.push_back({alg.name, log_kl(clean, estimate, kDefaultEpsilon)});
  }
  return report;
}

void write_inpaint_report_csv(const InpaintReport& report, const std::filesystem::path& path) {
  auto f = open_for_write(path);
  f << "algorithm,log_kl\n";
  for (const auto& s : report.scores) f << s.algorithm << ',' << format_real(s.log_kl) << '\n';
  if (!f) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------

FluorMixture gen_fluorescence_mixture(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank,
                                      std::uint64_t seed) {
  if (rank < 1 || rows < 32 || cols < 3 * rank) {
    throw ConfigError("gen_fluorescence_mixture: need F >= 32, K >= 1 and T >= 3K");
  }
  Rng rng(seed);
  const double f_rows = static_cast<double>(rows);
  const double f_rank = static_cast<double>(rank);
  FluorMixture m;
  m.spectra = MatrixXd::Zero(rows, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const int bumps = 1 + static_cast<int>(rng.below(3));
    for (int b = 0; b < bumps; ++b) {
      // The main peak of species k lies in the k-th slice of the band.
      const double centre = b == 0 ? (static_cast<double>(k) + rng.uniform(0.2, 0.8)) / f_rank
                                   : rng.uniform(0.05, 0.95);
      const double height = b == 0 ? 1.0 : rng.uniform(0.2, 0.6);
      const double width = rng.uniform(0.03, 0.08) * f_rows;
      for (Eigen::Index f = 0; f < rows; ++f) {
        const double d = (static_cast<double>(f) - centre * f_rows) / width;
        m.spectra(f, k) += height * std::exp(-0.5 * d * d);
      }
    }
  }
  m.concentrations.resize(rank, cols);
  for (Eigen::Index k = 0; k < rank; ++k)
    for (Eigen::Index t = 0; t < cols; ++t) m.concentrations(k, t) = 1.0 - rng.uniform();

  const MatrixXd clean = m.spectra * m.concentrations;
  const double level = 0.01 * clean.mean();
  m.x.resize(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m.x(i, j) = std::max(0.0, clean(i, j) + level * std::abs(rng.normal()));
  return m;
}

std::vector<Eigen::Index> greedy_match(const MatrixXd& estimated, const MatrixXd& reference) {
  if (estimated.rows() != reference.rows() || estimated.cols() != reference.cols()) {
    throw DimensionError("greedy_match: shapes differ");
  }
  const Eigen::Index k = reference.cols();
  MatrixXd score(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index e = 0; e < k; ++e) {
      const VectorXd a = reference.col(r);
      const VectorXd b = estimated.col(e);
      try {
        score(r, e) = correlation(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                                  std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
      } catch (const std::domain_error&) {
        score(r, e) = -2.0;  // constant column; matched last
      }
    }
  }
  std::vector<Eigen::Index> match(static_cast<std::size_t>(k), -1);
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  for (Eigen::Index step = 0; step < k; ++step) {
    double best = -std::numeric_limits<double>::infinity();
    Eigen::Index br = -1, be = -1;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (match[static_cast<std::size_t>(r)] >= 0) continue;
      for (Eigen::Index e = 0; e < k; ++e) {
        if (used[static_cast<std::size_t>(e)]) continue;
        if (score(r, e) > best) {
          best = score(r, e);
          br = r;
          be = e;
        }
      }
    }
    match[static_cast<std::size_t>(br)] = be;
    used[static_cast<std::size_t>(be)] = true;
  }
  return match;
}

FluorReport run_fluor_experiment(const FluorConfig& config) {
  if (config.iterations < 1) throw ConfigError("fluor: iterations must be positive");
  const FluorMixture mix =
      gen_fluorescence_mixture(config.rows, config.cols, config.rank, derive_seed(config.seed, 0xF1));
  const double eps = kDefaultEpsilon;

  // Oracle: Euclidean updates of H only, with W fixed to the true spectra.
  FactorPairXd oracle = init_factors<double>(config.rows, config.cols, config.rank,
                                             derive_seed(config.seed, 0xF2), eps);
  oracle.W = mix.spectra;
  for (int it = 0; it < config.iterations; ++it) {
    update_h(Model::Euclidean, Rule::MUR, mix.x, oracle, eps);
  }
  const auto oracle_sources = wiener_separate(mix.x, rank1_components(oracle), eps);

  const std::vector<Algorithm> algorithms{{"euclidean", Model::Euclidean, Rule::MUR},
                                          {"kl", Model::KL, Rule::MUR},
                                          {"levy", Model::Levy, config.levy_rule}};
  FluorReport report;
  report.correlations.resize(static_cast<Eigen::Index>(algorithms.size()), config.rank);
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    FitConfig fc;
    fc.model = algorithms[a].model;
    fc.rule = algorithms[a].rule;
    fc.rank = config.rank;
    fc.iterations = config.iterations;
    fc.seed = derive_seed(config.seed, 0xF3);
    const auto [est, trace] = fit(mix.x, fc);
    const auto match = greedy_match(est.W, mix.spectra);
    const auto sources = wiener_separate(mix.x, rank1_components(est), eps);
    for (Eigen::Index k = 0; k < config.rank; ++k) {
      report.correlations(static_cast<Eigen::Index>(a), k) =
          correlation(sources[static_cast<std::size_t>(match[static_cast<std::size_t>(k)])],
                      oracle_sources[static_cast<std::size_t>(k)]);
    }
    report.algorithms.push_back(algorithms[a].name);
  }
  return report;
}

void write_fluor_report_csv(const FluorReport& report, const std::filesystem::path& path) {
  auto f = open_for_write(path);
  f << "algorithm";
  for (Eigen::Index k = 0; k < report.correlations.cols(); ++k) f << ",source_" << (k + 1);
  f << '\n';
  for (std::size_t a = 0; a < report.algorithms.size(); ++a) {
    f << report.algorithms[a];
    for (Eigen::Index k = 0; k < report.correlations.cols(); ++k) {
      f << ',' << format_real(report.correlations(static_cast<Eigen::Index>(a), k));
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace levynmf
