// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "levynmf/experiments.hpp"
#include "levynmf/metrics.hpp"
#include "levynmf/signal_io.hpp"
#include "levynmf/stable.hpp"
#include "support.hpp"

using namespace levynmf;

namespace {

double kurtosis(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0;
  for (double x : v) m += x;
  m /= n;
  double m2 = 0, m4 = 0;
  for (double x : v) {
    m2 += (x - m) * (x - m);
    m4 += std::pow(x - m, 4);
  }
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2);
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("sparse factors") {
  const auto f = gen_sparse_factors(50, 50, 5, 1);
  CHECK(f.W.rows() == 50);
  CHECK(f.W.cols() == 5);
  CHECK(f.H.rows() == 5);
  CHECK(f.H.cols() == 50);
  CHECK(f.W.minCoeff() >= 0);
  CHECK(f.H.minCoeff() >= 0);

  const auto big = gen_sparse_factors(1000, 1000, 10, 2);
  std::vector<double> g4(big.W.data(), big.W.data() + big.W.size());
  Rng rng(3);
  std::vector<double> half(10000);
  for (auto& x : half) x = std::abs(rng.normal());
  CHECK(kurtosis(g4) > 10 * kurtosis(half));

  const auto again = gen_sparse_factors(50, 50, 5, 1);
  CHECK(again.W == f.W);
  CHECK(again.H == f.H);
}

TEST_CASE("positive stable observations") {
  const FactorPairXd ones{MatrixXd::Ones(100, 1), MatrixXd::Ones(1, 100)};
  const MatrixXd x = gen_pas_observations(ones, 0.5, 4);
  CHECK(x.minCoeff() > 0);
  std::vector<double> v(x.data(), x.data() + x.size());
  CHECK(median(v) == doctest::Approx(2.19811).epsilon(0.03));

  auto tail_ratio = [&](double alpha) {
    const MatrixXd y = gen_pas_observations(ones, alpha, 5);
    std::vector<double> w(y.data(), y.data() + y.size());
    std::sort(w.begin(), w.end());
    return std::log(w[static_cast<std::size_t>(0.99 * w.size())]) - std::log(w[w.size() / 2]);
  };
  CHECK(tail_ratio(0.1) > tail_ratio(0.5));

  const auto f = gen_sparse_factors(20, 20, 3, 6);
  const MatrixXd a = gen_pas_observations(f, 0.1, 7);
  CHECK(a.minCoeff() > 0);
  CHECK(a.allFinite());
  CHECK(gen_pas_observations(f, 0.1, 7) == a);
  CHECK_THROWS_AS(gen_pas_observations(f, 1.0, 7), std::domain_error);
}

TEST_CASE("log scale field") {
  MatrixXd wh(1, 2);
  wh << 4.0, 0.0;
  const MatrixXd l = log_scale_field(wh, 0.5);
  CHECK(l(0, 0) == doctest::Approx(2 * std::log(4.0)));
  CHECK(std::isfinite(l(0, 1)));
}

TEST_CASE("bench output shape and order") {
  BenchConfig c;
  c.alphas = {0.5, 0.1, 0.3};
  c.rows = 12;
  c.cols = 10;
  c.rank = 2;
  c.iterations = 10;
  c.runs = 3;
  c.seed = 9;
  const auto r = run_impulsive_bench(c);
  REQUIRE(r.size() == 4 * 3 * 3);
  CHECK(r.front().algorithm == "euclidean");
  CHECK(r.front().alpha == 0.1);
  CHECK(r.back().algorithm == "levy");
  CHECK(r.back().alpha == 0.5);
  CHECK(r.back().run == 2);
  CHECK(std::is_sorted(r.begin(), r.end(), [](const BenchResult& a, const BenchResult& b) {
    return std::tie(a.algorithm, a.alpha, a.run) < std::tie(b.algorithm, b.alpha, b.run);
  }));
  for (const auto& x : r) {
    CHECK(std::isfinite(x.log10_alpha_dispersion));
    CHECK(std::isfinite(x.log10_kl));
  }
  const auto again = run_impulsive_bench(c);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].log10_kl == again[i].log10_kl);
    CHECK(r[i].seed == again[i].seed);
  }
  const auto s = summarize_bench(r);
  CHECK(s.size() == 12);
  for (const auto& x : s) CHECK(x.runs == 3);

  BenchConfig bad = c;
  bad.alphas = {1.2};
  CHECK_THROWS_AS(run_impulsive_bench(bad), ConfigError);
  bad.alphas = {};
  CHECK_THROWS_AS(run_impulsive_bench(bad), ConfigError);
}

TEST_CASE("bench metrics agree with direct evaluation at alpha one half") {
  BenchConfig c;
  c.alphas = {0.5};
  c.rows = 8;
  c.cols = 8;
  c.rank = 2;
  c.iterations = 20;
  c.runs = 1;
  const auto r = run_impulsive_bench(c);
  // Recompute the levy row from scratch.
  const std::uint64_t s = r.back().seed;
  const auto truth = gen_sparse_factors(8, 8, 2, derive_seed(s, 1));
  const MatrixXd x = gen_pas_observations(truth, 0.5, derive_seed(s, 2));
  FitConfig fc;
  fc.rank = 2;
  fc.iterations = 20;
  fc.seed = derive_seed(s, 3);
  const auto est = fit(x, fc).first;
  const MatrixXd sigma = truth.product().array().square().matrix();
  const MatrixXd sigma_hat = est.product().array().square().matrix();
  CHECK(r.back().log10_alpha_dispersion ==
        doctest::Approx(std::log10(alpha_dispersion<double>(sigma, sigma_hat, 0.5))).epsilon(1e-10));
  CHECK(r.back().log10_kl == doctest::Approx(std::log10(gkl_divergence<double>(sigma, sigma_hat, 1e-12))).epsilon(1e-8));
}

TEST_CASE("pow10 formatting") {
  CHECK(format_pow10(0.0) == "1.00000000000000e+0");
  CHECK(format_pow10(2.0) == "1.00000000000000e+2");
  CHECK(format_pow10(std::log10(2.5)) == "2.50000000000000e+0");
  CHECK(format_pow10(1234.5).substr(0, 6) == "3.1622");
  CHECK(format_pow10(1234.5).substr(16) == "e+1234");
  CHECK(format_pow10(-3.0) == "1.00000000000000e-3");
  CHECK(format_pow10(-std::numeric_limits<double>::infinity()) == "0");
}

TEST_CASE("percentile") {
  MatrixXd m(1, 5);
  m << 5, 1, 4, 2, 3;
  CHECK(percentile(m, 0.0) == 1.0);
  CHECK(percentile(m, 1.0) == 5.0);
  CHECK(percentile(m, 0.5) == 3.0);
  CHECK(percentile(m, 0.95) == doctest::Approx(4.8));
}

TEST_CASE("impulsive corruption") {
  Rng rng(1);
  const MatrixXd x = testing::random_matrix(50, 50, rng);
  const auto c = corrupt_impulsive(x, 0.1, 2);
  CHECK((c.mask.array() == 0).count() == 250);
  CHECK(c.mask.sum() == 2500 - 250);
  const double s = 100 * percentile(x, 0.95);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (c.mask(i) == 1) {
      REQUIRE(c.corrupted(i) == x(i));
    } else {
      REQUIRE(c.corrupted(i) >= 0.5 * s);
      REQUIRE(c.corrupted(i) <= 1.5 * s);
    }
  }
  CHECK_THROWS_AS(corrupt_impulsive(x, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(corrupt_impulsive(x, 1.0, 1), ConfigError);
  CHECK(corrupt_impulsive(x, 0.1, 2).corrupted == c.corrupted);
}

TEST_CASE("harmonic spectrogram") {
  const MatrixXd x = gen_harmonic_spectrogram(257, 200, 3);
  CHECK(x.rows() == 257);
  CHECK(x.cols() == 200);
  CHECK(x.minCoeff() > 0);
  CHECK(x.allFinite());
  CHECK(gen_harmonic_spectrogram(257, 200, 3) == x);
  CHECK(gen_harmonic_spectrogram(257, 200, 4) != x);
}

TEST_CASE("inpainting on a small spectrogram") {
  const MatrixXd x = gen_harmonic_spectrogram(64, 60, 5);
  InpaintConfig c;
  c.rank = 8;
  c.iterations = 60;
  c.seed = 1;
  const auto r = run_inpaint_experiment(x, c);
  REQUIRE(r.scores.size() == 4);
  CHECK(r.scores[0].algorithm == "levy");
  CHECK(r.scores[3].algorithm == "weighted_is");
  CHECK(r.levy_estimate.rows() == 64);
  CHECK(r.score("levy") < r.score("is"));
  CHECK_THROWS_AS(r.score("cauchy"), std::out_of_range);

  InpaintConfig clean = c;
  clean.fraction = 0;
  const auto r0 = run_inpaint_experiment(x, clean);
  for (const auto& name : {"levy", "is", "kl", "weighted_is"}) CHECK(r0.score(name) < r.score(name));
}

TEST_CASE("fluorescence mixture") {
  const auto m = gen_fluorescence_mixture(128, 400, 3, 1);
  CHECK(m.x.minCoeff() >= 0);
  CHECK(m.spectra.minCoeff() >= 0);
  const MatrixXd clean = m.spectra * m.concentrations;
  Eigen::JacobiSVD<MatrixXd> svd(clean);
  const auto sv = svd.singularValues();
  CHECK(sv(2) > 1e-6 * sv(0));
  CHECK(sv(3) < 1e-10 * sv(0));
  for (Eigen::Index k = 0; k < 3; ++k) {
    int maxima = 0;
    for (Eigen::Index f = 1; f + 1 < 128; ++f) {
      if (m.spectra(f, k) > m.spectra(f - 1, k) && m.spectra(f, k) >= m.spectra(f + 1, k)) ++maxima;
    }
    CHECK(maxima >= 1);
    CHECK(maxima <= 9);
  }
  CHECK_THROWS_AS(gen_fluorescence_mixture(16, 400, 3, 1), ConfigError);
  CHECK_THROWS_AS(gen_fluorescence_mixture(128, 8, 3, 1), ConfigError);
}

TEST_CASE("greedy matching") {
  Rng rng(2);
  const MatrixXd ref = testing::random_matrix(30, 3, rng);
  MatrixXd est(30, 3);
  est.col(0) = 2 * ref.col(2);
  est.col(1) = ref.col(0);
  est.col(2) = 0.5 * ref.col(1);
  const auto m = greedy_match(est, ref);
  CHECK(m == std::vector<Eigen::Index>{1, 2, 0});
}

TEST_CASE("fluorescence experiment") {
  FluorConfig c;
  c.seed = 3;
  const auto r = run_fluor_experiment(c);
  CHECK(r.algorithms == std::vector<std::string>{"euclidean", "kl", "levy"});
  CHECK(r.correlations.rows() == 3);
  CHECK(r.correlations.cols() == 3);
  CHECK(r.correlations.maxCoeff() <= 1.0);
  CHECK(r.correlations.minCoeff() >= -1.0);
  CHECK(run_fluor_experiment(c).correlations == r.correlations);
}

TEST_CASE("experiment defaults") {
  const BenchConfig b;
  CHECK(b.rows == 50);
  CHECK(b.cols == 50);
  CHECK(b.rank == 5);
  CHECK(b.iterations == 200);
  CHECK(b.alphas.front() == 0.1);
  CHECK(b.alphas.back() == 0.5);
  const InpaintConfig i;
  CHECK(i.fraction == 0.1);
  CHECK(i.rank == 30);
  CHECK(i.iterations == 200);
  const FluorConfig f;
  CHECK(f.rows == 128);
  CHECK(f.cols == 400);
  CHECK(f.rank == 3);
  CHECK(f.iterations == 50);
  const StftConfig s = StftConfig::for_sample_rate(8000);
  CHECK(s.window_len == 1000);
  CHECK(s.hop == 250);
}
