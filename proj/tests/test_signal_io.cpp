// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "levynmf/signal_io.hpp"
#include "support.hpp"

using namespace levynmf;
namespace fs = std::filesystem;

namespace {

const fs::path dir = testing::scratch_dir("signal_io");

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

void put(std::string& s, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

/// Float32 WAV, optionally with a WAVE_FORMAT_EXTENSIBLE header.
std::string float_wav(const std::vector<float>& interleaved, int channels, int rate, bool extensible) {
  std::string fmt;
  put(fmt, extensible ? 0xFFFE : 3, 2);
  put(fmt, static_cast<std::uint32_t>(channels), 2);
  put(fmt, static_cast<std::uint32_t>(rate), 4);
  put(fmt, static_cast<std::uint32_t>(rate * channels * 4), 4);
  put(fmt, static_cast<std::uint32_t>(channels * 4), 2);
  put(fmt, 32, 2);
  if (extensible) {
    put(fmt, 22, 2);
    put(fmt, 32, 2);
    put(fmt, 0, 4);
    put(fmt, 3, 2);  // subformat GUID begins with the format tag
    fmt += std::string("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
  }
  std::string data(interleaved.size() * 4, '\0');
  std::memcpy(data.data(), interleaved.data(), data.size());
  std::string out = "RIFF";
  put(out, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + data.size()), 4);
  out += "WAVEfmt ";
  put(out, static_cast<std::uint32_t>(fmt.size()), 4);
  out += fmt;
  out += "data";
  put(out, static_cast<std::uint32_t>(data.size()), 4);
  return out + data;
}

}  // namespace

TEST_CASE("PCM16 sine round trip") {
  std::vector<double> s(8000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.5 * std::sin(2 * std::numbers::pi * 440 * i / 8000.0);
  const fs::path p = dir / "sine.wav";
  write_wav_pcm16(p, s, 8000);
  const AudioBuffer a = read_wav_mono(p);
  CHECK(a.sample_rate == 8000);
  REQUIRE(a.samples.size() == 8000);
  double peak = 0;
  for (double v : a.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(0.5).epsilon(1e-3));
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(std::abs(a.samples[i] - s[i]) <= 1.0 / 32768);
}

TEST_CASE("stereo is averaged") {
  std::vector<double> st{0.5, -0.5, 0.25, 0.75, -1.0, 0.0};
  const fs::path p = dir / "stereo.wav";
  write_wav_pcm16(p, st, 16000, 2);
  const AudioBuffer a = read_wav_mono(p);
  REQUIRE(a.samples.size() == 3);
  CHECK(a.samples[0] == doctest::Approx(0.0).epsilon(1e-4));
  CHECK(a.samples[1] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(a.samples[2] == doctest::Approx(-0.5).epsilon(1e-4));
}

TEST_CASE("float32 and extensible WAV") {
  const std::vector<float> v{0.1f, -0.2f, 0.3f, 0.4f};
  for (bool ext : {false, true}) {
    const fs::path p = dir / (ext ? "ext.wav" : "float.wav");
    write_text(p, float_wav(v, 1, 22050, ext));
    const AudioBuffer a = read_wav_mono(p);
    CHECK(a.sample_rate == 22050);
    REQUIRE(a.samples.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.samples[i] == doctest::Approx(v[i]).epsilon(1e-7));
  }
}

TEST_CASE("corrupt WAV files are rejected") {
  std::vector<double> s(100, 0.1);
  const fs::path good = dir / "good.wav";
  write_wav_pcm16(good, s, 8000);
  const std::string bytes = testing::slurp(good);

  write_text(dir / "trunc.wav", bytes.substr(0, bytes.size() - 10));
  CHECK_THROWS_AS(read_wav_mono(dir / "trunc.wav"), IoError);
  write_text(dir / "header.wav", bytes.substr(0, 20));
  CHECK_THROWS_AS(read_wav_mono(dir / "header.wav"), IoError);
  write_text(dir / "junk.wav", "not a wav file at all, definitely not");
  CHECK_THROWS_AS(read_wav_mono(dir / "junk.wav"), IoError);
  CHECK_THROWS_AS(read_wav_mono(dir / "missing.wav"), IoError);
}

TEST_CASE("hann window is periodic") {
  const VectorXd w = hann_window(8);
  CHECK(w(0) == 0.0);
  CHECK(w(4) == doctest::Approx(1.0));
  CHECK(w(2) == doctest::Approx(0.5));
  CHECK(w(1) == doctest::Approx(w(7)));
}

TEST_CASE("stft shapes") {
  AudioBuffer a{std::vector<double>(1000, 0.0), 8000};
  const MatrixXd s = stft_magnitude(a, StftConfig{});
  CHECK(s.rows() == 501);
  CHECK(s.cols() == 1);
  CHECK(s.isZero(0));

  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto len = 2 + static_cast<Eigen::Index>(rng.below(200));
    const auto hop = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(len)));
    const auto n = len + static_cast<std::size_t>(rng.below(1000));
    AudioBuffer b{std::vector<double>(n), 8000};
    for (auto& x : b.samples) x = rng.uniform(-1, 1);
    const MatrixXd m = stft_magnitude(b, StftConfig{len, hop});
    CHECK(m.rows() == len / 2 + 1);
    CHECK(m.cols() == static_cast<Eigen::Index>((n - static_cast<std::size_t>(len)) / static_cast<std::size_t>(hop)) + 1);
    CHECK(m.minCoeff() >= 0);

    AudioBuffer neg = b;
    for (auto& x : neg.samples) x = -x;
    CHECK(stft_magnitude(neg, StftConfig{len, hop}) == m);
  }

  AudioBuffer shortb{std::vector<double>(999, 0.0), 8000};
  CHECK_THROWS_AS(stft_magnitude(shortb, StftConfig{}), DimensionError);
  CHECK_THROWS(stft_magnitude(a, StftConfig{1000, 1001}));
}

TEST_CASE("stft of a bin-centred sine") {
  const int len = 1000;
  const int bin = 55;  // 440 Hz at 8 kHz with a 1000-point DFT
  AudioBuffer a{std::vector<double>(4000), 8000};
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    a.samples[i] = std::sin(2 * std::numbers::pi * bin * static_cast<double>(i) / len);
  }
  const MatrixXd m = stft_magnitude(a, StftConfig{});
  for (Eigen::Index t = 0; t < m.cols(); ++t) {
    Eigen::Index best;
    m.col(t).maxCoeff(&best);
    CHECK(best == bin);
    for (Eigen::Index f = 0; f < m.rows(); ++f) {
      if (std::abs(f - bin) > 1) CHECK(m(bin, t) >= 20 * m(f, t));
    }
    // Hann-windowed amplitude: L/4
    CHECK(m(bin, t) == doctest::Approx(len / 4.0).epsilon(1e-9));
  }
}

TEST_CASE("stft config by sample rate") {
  const auto c8 = StftConfig::for_sample_rate(8000);
  CHECK(c8.window_len == 1000);
  CHECK(c8.hop == 250);
  const auto c44 = StftConfig::for_sample_rate(44100);
  CHECK(c44.window_len == 5513);
  CHECK(c44.hop == 1378);
}

TEST_CASE("CSV round trip") {
  MatrixXd m(2, 2);
  m << 0, 1, 2.5, 3;
  write_matrix_csv(m, dir / "m.csv");
  CHECK(testing::slurp(dir / "m.csv") == "0,1\n2.5,3\n");
  CHECK(read_matrix_csv(dir / "m.csv") == m);

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    MatrixXd r(1 + rng.below(10), 1 + rng.below(10));
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = std::exp(rng.uniform(-300, 300));
    write_matrix_csv(r, dir / "r.csv");
    CHECK(read_matrix_csv(dir / "r.csv") == r);
  }
}

TEST_CASE("CSV errors name the cell") {
  write_text(dir / "abc.csv", "1,2\n3,abc\n");
  try {
    read_matrix_csv(dir / "abc.csv");
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("row 2, column 2") != std::string::npos);
  }
  write_text(dir / "neg.csv", "1,-2\n");
  CHECK_THROWS_AS(read_matrix_csv(dir / "neg.csv"), IoError);
  CHECK(read_real_csv(dir / "neg.csv")(0, 1) == -2.0);
  write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(dir / "ragged.csv"), IoError);
  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(read_matrix_csv(dir / "empty.csv"), IoError);
  write_text(dir / "crlf.csv", "1, 2\r\n3 ,4\r\n\n");
  MatrixXd expect(2, 2);
  expect << 1, 2, 3, 4;
  CHECK(read_matrix_csv(dir / "crlf.csv") == expect);
  CHECK_THROWS_AS(read_matrix_csv(dir / "nope.csv"), IoError);
}

TEST_CASE("vector CSV") {
  const std::vector<double> v{1.5, 0.1, -3};
  write_vector_csv(v, dir / "v.csv");
  CHECK(testing::slurp(dir / "v.csv") == "1.5\n0.10000000000000001\n-3\n");
}
