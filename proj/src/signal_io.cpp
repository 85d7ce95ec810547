// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "levynmf/signal_io.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

namespace levynmf {

namespace {

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

StftConfig StftConfig::for_sample_rate(int sample_rate) {
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  StftConfig c;
  c.window_len = std::max<Eigen::Index>(1, std::lround(0.125 * sample_rate));
  c.hop = std::max<Eigen::Index>(1, std::lround(static_cast<double>(c.window_len) / 4.0));
  return c;
}

AudioBuffer read_wav_mono(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw IoError(where + "not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || body + len > bytes.size()) throw IoError(where + "truncated fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (len < 26) throw IoError(where + "truncated extensible fmt chunk");
        format = read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (body + len > bytes.size()) throw IoError(where + "truncated data chunk");
      data = bytes.data() + body;
      data_len = len;
      break;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) throw IoError(where + "missing fmt chunk");
  if (data == nullptr) throw IoError(where + "missing data chunk");
  if (channels == 0 || rate == 0) throw IoError(where + "invalid channel count or sample rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw IoError(where + "unsupported encoding (format " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bits); expected PCM16 or float32");
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  if (data_len % frame_bytes != 0) throw IoError(where + "data chunk ends mid-frame");
  const std::size_t frames = data_len / frame_bytes;
  if (frames == 0) throw IoError(where + "no samples");

  AudioBuffer out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(frames);
  for (std::size_t n = 0; n < frames; ++n) {
    double acc = 0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + n * frame_bytes + c * (bits / 8);
      if (pcm16) {
        acc += static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else {
        const std::uint32_t u = read_u32(p);
        float f;
        std::memcpy(&f, &u, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    out.samples[n] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate, int channels) {
  if (sample_rate <= 0 || channels <= 0) throw ConfigError("invalid WAV parameters");
  if (samples.size() % static_cast<std::size_t>(channels) != 0) {
    throw DimensionError("write_wav_pcm16: sample count is not a multiple of the channel count");
  }
  const auto data_len = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate * channels * 2));
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_len);
  for (double s : samples) {
    const auto q = static_cast<std::int16_t>(std::lround(std::clamp(s, -1.0, 32767.0 / 32768.0) * 32768.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

VectorXd hann_window(Eigen::Index length) {
  VectorXd w(length);
  for (Eigen::Index n = 0; n < length; ++n) {
    w(n) = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(length));
  }
  return w;
}

MatrixXd stft_magnitude(const AudioBuffer& audio, const StftConfig& config) {
  const Eigen::Index len = config.window_len;
  if (len < 1 || config.hop < 1 || config.hop > len) {
    throw ConfigError("stft: need 0 < hop <= window_len");
  }
  const auto n = static_cast<Eigen::Index>(audio.samples.size());
  if (n < len) throw DimensionError("stft: signal shorter than one window");

  const Eigen::Index frames = (n - len) / config.hop + 1;
  const Eigen::Index bins = len / 2 + 1;
  const VectorXd window = hann_window(len);

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<std::size_t>(len));
  std::vector<std::complex<double>> spectrum;
  MatrixXd out(bins, frames);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const Eigen::Index start = t * config.hop;
    for (Eigen::Index i = 0; i < len; ++i) {
      frame[static_cast<std::size_t>(i)] = audio.samples[static_cast<std::size_t>(start + i)] * window(i);
    }
    fft.fwd(spectrum, frame);
    for (Eigen::Index f = 0; f < bins; ++f) out(f, t) = std::abs(spectrum[static_cast<std::size_t>(f)]);
  }
  return out;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path) {
  require_nonnegative(m, "write_matrix_csv");
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_real(m(i, j));
    }
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << out;
  if (!f) throw IoError("write failed for " + path.string());
}

void write_vector_csv(std::span<const double> values, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  for (double v : values) f << format_real(v) << '\n';
  if (!f) throw IoError("write failed for " + path.string());
}

namespace {

MatrixXd parse_csv(const std::filesystem::path& path, bool require_nonneg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string where = path.string() + ": ";

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      // Only trailing blank lines are tolerated.
      std::string rest;
      while (std::getline(in, rest)) {
        if (!rest.empty() && rest != "\r") {
          throw IoError(where + "blank line at row " + std::to_string(row));
        }
      }
      break;
    }
    std::vector<double> values;
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      ++col;
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
      double v = 0;
      const auto res = std::from_chars(first, last, v);
      if (first == last || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw IoError(where + "non-numeric cell at row " + std::to_string(row) + ", column " +
                      std::to_string(col));
      }
      if (require_nonneg && v < 0) {
        throw IoError(where + "negative value at row " + std::to_string(row) + ", column " +
                      std::to_string(col));
      }
      values.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw IoError(where + "ragged row " + std::to_string(row) + ": expected " +
                    std::to_string(rows.front().size()) + " columns, found " +
                    std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IoError(where + "empty file");

  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

MatrixXd read_matrix_csv(const std::filesystem::path& path) { return parse_csv(path, true); }

MatrixXd read_real_csv(const std::filesystem::path& path) { return parse_csv(path, false); }

}  // namespace levynmf
