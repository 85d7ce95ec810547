// Copyright 2026 The levynmf Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "levynmf/types.hpp"

namespace levynmf {

struct AudioBuffer {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 0;          // Hz
};

enum class WindowType { Hann };

struct StftConfig {
  Eigen::Index window_len = 1000;
  Eigen::Index hop = 250;
  WindowType window = WindowType::Hann;

  /// 125 ms Hann window with 75% overlap at the given rate.
  static StftConfig for_sample_rate(int sample_rate);
};

/// Reads a RIFF/WAVE file (PCM16 or IEEE float32, any channel count) and
/// averages the channels. Throws IoError on anything malformed or truncated.
AudioBuffer read_wav_mono(const std::filesystem::path& path);

/// Writes a PCM16 WAV file from interleaved samples, clipped to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples,
                     int sample_rate, int channels = 1);

/// Periodic Hann window 0.5 - 0.5 cos(2 pi n / L).
VectorXd hann_window(Eigen::Index length);

/// Magnitude STFT, (window_len/2 + 1) x T with T = (N - window_len)/hop + 1.
/// Frames start at sample 0 with no padding; DFT size equals window_len.
MatrixXd stft_magnitude(const AudioBuffer& audio, const StftConfig& config);

/// Comma-separated, one matrix row per line, 17 significant digits, no header.
void write_matrix_csv(const MatrixXd& m, const std::filesystem::path& path);

/// Parses a nonnegative matrix CSV. Errors name the offending 1-based row/column.
MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Same format as read_matrix_csv without the nonnegativity check.
MatrixXd read_real_csv(const std::filesystem::path& path);

/// One value per line.
void write_vector_csv(std::span<const double> values, const std::filesystem::path& path);

/// %.17g formatting used by every CSV writer.
std::string format_real(double v);

}  // namespace levynmf
