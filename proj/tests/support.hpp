// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "levynmf/random.hpp"
#include "levynmf/types.hpp"

namespace testing {

using levynmf::MatrixXd;

/// sup_x |F_n(x) - cdf(x)|.
inline double ks_statistic(std::vector<double> s, const std::function<double(double)>& cdf) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - c, c - static_cast<double>(i) / n});
  }
  return d;
}

/// sup_x |F_a(x) - F_b(x)| between two empirical distributions.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Entries uniform on [lo, hi).
inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, levynmf::Rng& rng,
                              double lo = 0.1, double hi = 2.0) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.uniform(lo, hi);
  return m;
}

inline double max_rel_diff(const MatrixXd& a, const MatrixXd& b) {
  double d = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a(i) - b(i)) / std::max(std::abs(b(i)), 1e-300));
  }
  return d;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

/// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("levynmf_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
