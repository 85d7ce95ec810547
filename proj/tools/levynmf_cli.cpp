// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// levynmf: command-line front end.
//
//   levynmf fit --input X.csv --model levy --rule mm --rank 5 --out-w W.csv --out-h H.csv
//   levynmf separate --input X.csv --w W.csv --h H.csv --out-prefix part
//   levynmf bench-impulsive --alphas 0.1,0.3,0.5 --runs 10 --out bench.csv
//   levynmf inpaint [--input song.wav|spectrogram.csv] --out report.csv
//   levynmf fluor --out fluor.csv
//
// Exit status: 0 success, 1 I/O or data error, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "levynmf/experiments.hpp"
#include "levynmf/fit.hpp"
#include "levynmf/separation.hpp"
#include "levynmf/signal_io.hpp"

namespace fs = std::filesystem;
using namespace levynmf;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

struct Resolved {
  std::string command;
  std::vector<std::pair<std::string, std::string>> items;

  template <typename T>
  Resolved& add(const std::string& key, const T& value) {
    if constexpr (std::is_convertible_v<T, std::string>) {
      items.emplace_back(key, std::string(value));
    } else if constexpr (std::is_floating_point_v<T>) {
      items.emplace_back(key, format_real(value));
    } else {
      items.emplace_back(key, std::to_string(value));
    }
    return *this;
  }

  void print() const {
    std::fprintf(stderr, "levynmf %s:", command.c_str());
    for (const auto& [k, v] : items) std::fprintf(stderr, " %s=%s", k.c_str(), v.c_str());
    std::fprintf(stderr, "\n");
  }
};

Model parse_model(const std::string& s) {
  if (s == "levy") return Model::Levy;
  if (s == "kl") return Model::KL;
  if (s == "is") return Model::IS;
  if (s == "eu" || s == "euclidean") return Model::Euclidean;
  if (s == "weighted_is" || s == "wis") return Model::WeightedIS;
  throw ConfigError("unknown model '" + s + "'");
}

Rule parse_rule(const std::string& s) {
  if (s == "mur") return Rule::MUR;
  if (s == "mm") return Rule::MM;
  throw ConfigError("unknown rule '" + s + "'");
}

std::pair<Eigen::Index, Eigen::Index> parse_size(const std::vector<int>& v) {
  if (v.size() != 2 || v[0] < 1 || v[1] < 1) throw ConfigError("--size expects F,T with F,T >= 1");
  return {v[0], v[1]};
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}

bool has_extension(const fs::path& p, const char* ext) {
  std::string e = p.extension().string();
  for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e == ext;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string input, model = "levy", rule, mask, out_w, out_h, trace;
  Eigen::Index rank = 5;
  int iters = 200;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
};

int run_fit(const FitArgs& a) {
  FitConfig c;
  c.model = parse_model(a.model);
  c.rule = a.rule.empty() ? (c.model == Model::Levy ? Rule::MM : Rule::MUR) : parse_rule(a.rule);
  c.rank = a.rank;
  c.iterations = a.iters;
  c.seed = a.seed;
  c.epsilon = a.epsilon;
  if (c.rule == Rule::MM && c.model != Model::Levy) throw ConfigError("rule mm requires model levy");
  if (!a.mask.empty() && c.model != Model::WeightedIS) throw ConfigError("--mask requires model weighted_is");
  if (a.mask.empty() && c.model == Model::WeightedIS) throw ConfigError("model weighted_is requires --mask");

  Resolved{"fit"}
      .add("input", a.input)
      .add("model", to_string(c.model))
      .add("rule", to_string(c.rule))
      .add("rank", c.rank)
      .add("iters", c.iterations)
      .add("seed", c.seed)
      .add("epsilon", c.epsilon)
      .add("mask", a.mask.empty() ? "none" : a.mask)
      .print();

  const MatrixXd x = read_matrix_csv(a.input);
  if (!a.mask.empty()) c.mask = read_matrix_csv(a.mask);
  validate(c, x.rows(), x.cols());
  const auto [factors, trace] = fit(x, c);

  write_matrix_csv(factors.W, a.out_w);
  write_matrix_csv(factors.H, a.out_h);
  if (!a.trace.empty()) write_vector_csv(trace.costs, a.trace);
  std::fprintf(stderr, "final cost %s after %zu iterations\n", format_real(trace.costs.back()).c_str(),
               trace.costs.size());
  return 0;
}

struct SeparateArgs {
  std::string input, w, h, prefix;
};

int run_separate(const SeparateArgs& a) {
  Resolved{"separate"}.add("input", a.input).add("w", a.w).add("h", a.h).add("out_prefix", a.prefix).print();
  const MatrixXd x = read_matrix_csv(a.input);
  const FactorPairXd f{read_matrix_csv(a.w), read_matrix_csv(a.h)};
  require_factor_shape(x, f, "separate");
  const auto sources = wiener_separate(x, rank1_components(f), kDefaultEpsilon);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    write_matrix_csv(sources[k], a.prefix + "_" + std::to_string(k + 1) + ".csv");
  }
  return 0;
}

struct BenchArgs {
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> size{50, 50};
  Eigen::Index rank = 5;
  int iters = 200, runs = 100;
  std::uint64_t seed = 0;
  std::string out, summary;
};

int run_bench(const BenchArgs& a) {
  BenchConfig c;
  c.alphas = a.alphas;
  std::tie(c.rows, c.cols) = parse_size(a.size);
  c.rank = a.rank;
  c.iterations = a.iters;
  c.runs = a.runs;
  c.seed = a.seed;
  if (c.rank < 1 || c.iterations < 1) throw ConfigError("rank and iters must be positive");
  Resolved{"bench-impulsive"}
      .add("alphas", join(c.alphas))
      .add("size", std::to_string(c.rows) + "," + std::to_string(c.cols))
      .add("rank", c.rank)
      .add("iters", c.iterations)
      .add("runs", c.runs)
      .add("seed", c.seed)
      .add("out", a.out)
      .print();

  const auto results = run_impulsive_bench(c);
  write_bench_csv(results, a.out);
  const auto summary = summarize_bench(results);
  if (!a.summary.empty()) write_bench_summary_csv(summary, a.summary);
  for (const auto& s : summary) {
    std::fprintf(stderr, "%-10s alpha=%s mean_alpha_dispersion=%s mean_kl=%s\n", s.algorithm.c_str(),
                 format_real(s.alpha).c_str(), format_pow10(s.log10_mean_alpha_dispersion).c_str(),
                 format_pow10(s.log10_mean_kl).c_str());
  }
  return 0;
}

struct InpaintArgs {
  std::string input, out, out_spectrogram;
  std::vector<int> size{257, 200};
  double fraction = 0.1;
  Eigen::Index rank = 30;
  int iters = 200;
  std::uint64_t seed = 0;
};

int run_inpaint(const InpaintArgs& a) {
  InpaintConfig c;
  c.fraction = a.fraction;
  c.rank = a.rank;
  c.iterations = a.iters;
  c.seed = a.seed;
  if (!(c.fraction >= 0.0 && c.fraction < 1.0)) throw ConfigError("--fraction must lie in [0, 1)");
  if (c.rank < 1 || c.iterations < 1) throw ConfigError("rank and iters must be positive");
  const auto [rows, cols] = parse_size(a.size);

  Resolved r{"inpaint"};
  r.add("input", a.input.empty() ? "synthetic" : a.input);
  if (a.input.empty()) r.add("size", std::to_string(rows) + "," + std::to_string(cols));
  r.add("fraction", c.fraction).add("rank", c.rank).add("iters", c.iterations).add("seed", c.seed);

  MatrixXd clean;
  if (a.input.empty()) {
    r.print();
    clean = gen_harmonic_spectrogram(rows, cols, derive_seed(c.seed, 0x5E));
  } else if (has_extension(a.input, ".wav")) {
    const AudioBuffer audio = read_wav_mono(a.input);
    const StftConfig stft = StftConfig::for_sample_rate(audio.sample_rate);
    r.add("sample_rate", audio.sample_rate).add("window", stft.window_len).add("hop", stft.hop).print();
    clean = stft_magnitude(audio, stft);
  } else {
    r.print();
    clean = read_matrix_csv(a.input);
  }

  const InpaintReport report = run_inpaint_experiment(clean, c);
  write_inpaint_report_csv(report, a.out);
  if (!a.out_spectrogram.empty()) write_matrix_csv(report.levy_estimate, a.out_spectrogram);
  for (const auto& s : report.scores) {
    std::fprintf(stderr, "%-12s log_kl=%s\n", s.algorithm.c_str(), format_real(s.log_kl).c_str());
  }
  return 0;
}

struct FluorArgs {
  std::vector<int> size{128, 400};
  Eigen::Index rank = 3;
  int iters = 50;
  std::string rule = "mm";
  std::uint64_t seed = 0;
  std::string out;
};

int run_fluor(const FluorArgs& a) {
  FluorConfig c;
  std::tie(c.rows, c.cols) = parse_size(a.size);
  c.rank = a.rank;
  c.iterations = a.iters;
  c.levy_rule = parse_rule(a.rule);
  c.seed = a.seed;
  Resolved{"fluor"}
      .add("size", std::to_string(c.rows) + "," + std::to_string(c.cols))
      .add("rank", c.rank)
      .add("iters", c.iterations)
      .add("levy_rule", to_string(c.levy_rule))
      .add("seed", c.seed)
      .add("out", a.out)
      .print();
  const FluorReport report = run_fluor_experiment(c);
  write_fluor_report_csv(report, a.out);
  for (std::size_t i = 0; i < report.algorithms.size(); ++i) {
    std::fprintf(stderr, "%-10s mean correlation %s\n", report.algorithms[i].c_str(),
                 format_real(report.correlations.row(static_cast<Eigen::Index>(i)).mean()).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy NMF source separation toolkit"};
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Factorize a nonnegative CSV matrix");
  fit_cmd->add_option("--input", fa.input, "Input matrix (CSV)")->required();
  fit_cmd->add_option("--model", fa.model, "levy|kl|is|eu|weighted_is")->capture_default_str();
  fit_cmd->add_option("--rule", fa.rule, "mur|mm (default: mm for levy, mur otherwise)");
  fit_cmd->add_option("--rank", fa.rank, "Rank K")->capture_default_str();
  fit_cmd->add_option("--iters", fa.iters, "Iterations")->capture_default_str();
  fit_cmd->add_option("--seed", fa.seed, "Random seed")->capture_default_str();
  fit_cmd->add_option("--epsilon", fa.epsilon, "Flooring constant")->capture_default_str();
  fit_cmd->add_option("--mask", fa.mask, "{0,1} trust mask (CSV), weighted_is only");
  fit_cmd->add_option("--out-w", fa.out_w, "Output W (CSV)")->required();
  fit_cmd->add_option("--out-h", fa.out_h, "Output H (CSV)")->required();
  fit_cmd->add_option("--trace", fa.trace, "Per-iteration cost trace (CSV)");

  SeparateArgs sa;
  auto* sep_cmd = app.add_subcommand("separate", "Wiener-filter a mixture into rank-one sources");
  sep_cmd->set_help_flag("--help", "Print this help message and exit");
  sep_cmd->add_option("--input", sa.input, "Mixture (CSV)")->required();
  sep_cmd->add_option("--w", sa.w, "W (CSV)")->required();
  sep_cmd->add_option("--h", sa.h, "H (CSV)")->required();
  sep_cmd->add_option("--out-prefix", sa.prefix, "Writes <prefix>_k.csv, k = 1..K")->required();

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench-impulsive", "Positive alpha-stable benchmark");
  bench_cmd->add_option("--alphas", ba.alphas, "Comma-separated alpha grid")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--size", ba.size, "F,T")->delimiter(',')->expected(2)->capture_default_str();
  bench_cmd->add_option("--rank", ba.rank, "Rank K")->capture_default_str();
  bench_cmd->add_option("--iters", ba.iters, "Iterations")->capture_default_str();
  bench_cmd->add_option("--runs", ba.runs, "Runs per alpha")->capture_default_str();
  bench_cmd->add_option("--seed", ba.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--out", ba.out, "Per-run results (CSV)")->required();
  bench_cmd->add_option("--summary", ba.summary, "Per-(algorithm, alpha) means (CSV)");

  InpaintArgs ia;
  auto* inp_cmd = app.add_subcommand("inpaint", "Spectrogram inpainting under impulsive corruption");
  inp_cmd->add_option("--input", ia.input, "WAV file or spectrogram CSV (default: synthetic)");
  inp_cmd->add_option("--size", ia.size, "F,T of the synthetic spectrogram")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  inp_cmd->add_option("--fraction", ia.fraction, "Corrupted fraction")->capture_default_str();
  inp_cmd->add_option("--rank", ia.rank, "Rank K")->capture_default_str();
  inp_cmd->add_option("--iters", ia.iters, "Iterations")->capture_default_str();
  inp_cmd->add_option("--seed", ia.seed, "Random seed")->capture_default_str();
  inp_cmd->add_option("--out", ia.out, "Log-KL report (CSV)")->required();
  inp_cmd->add_option("--out-spectrogram", ia.out_spectrogram, "Restored Levy spectrogram (CSV)");

  FluorArgs la;
  auto* fl_cmd = app.add_subcommand("fluor", "Synthetic fluorescence unmixing");
  fl_cmd->add_option("--size", la.size, "F,T")->delimiter(',')->expected(2)->capture_default_str();
  fl_cmd->add_option("--rank", la.rank, "Number of species")->capture_default_str();
  fl_cmd->add_option("--iters", la.iters, "Iterations")->capture_default_str();
  fl_cmd->add_option("--levy-rule", la.rule, "mur|mm")->capture_default_str();
  fl_cmd->add_option("--seed", la.seed, "Random seed")->capture_default_str();
  fl_cmd->add_option("--out", la.out, "Correlation table (CSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*fit_cmd) return run_fit(fa);
    if (*sep_cmd) return run_separate(sa);
    if (*bench_cmd) return run_bench(ba);
    if (*inp_cmd) return run_inpaint(ia);
    if (*fl_cmd) return run_fluor(la);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitConfig;
}
