// Copyright 2026 The DANAS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DANAS_DSP_H_
#define DANAS_DSP_H_

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "danas/search_space.h"

namespace danas::dsp {

struct DspConfig {
  double window_s = 5.0;
  int frame_size = 2048;  // STFT n_fft
  int hop_length = 512;
  int n_mels = 80;
  int n_mfcc = 13;
  int sample_bits = 16;
  int source_rate_hz = 48000;

  std::vector<std::string> check() const;
};

// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct FeatureShape {
  int rows = 0;      // frequency / coefficient axis
  int cols = 0;      // time frames
  int channels = 1;

  friend bool operator==(const FeatureShape&, const FeatureShape&) = default;
};

struct FeatureTensor {
  Matrix values;  // rows x cols
  int channels = 1;

  FeatureShape shape() const { return {values.rows, values.cols, channels}; }
};

// Bytes needed to hold `window_s` seconds of raw samples.
uint64_t buffer_size_bytes(int sample_bits, int sample_rate_hz, double window_s);

// --- WAV I/O ----------------------------------------------------------------

class WavError : public std::runtime_error {
 public:
  enum class Kind { kIo, kMalformedHeader, kUnsupportedEncoding, kTruncatedData };
  WavError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct WavAudio {
  std::vector<double> samples;  // channel 0, scaled to [-1, 1)
  int rate_hz = 0;
};

WavAudio parse_wav(std::span<const uint8_t> bytes);
WavAudio read_wav(const std::filesystem::path& path);

// Canonical 44-byte header PCM16 writer. `interleaved` holds
// frames * channels samples in [-1, 1].
std::vector<uint8_t> encode_wav_pcm16(std::span<const double> interleaved, int rate_hz,
                                      int channels = 1);
void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> interleaved,
                     int rate_hz, int channels = 1);

// --- Signal processing ------------------------------------------------------

// Decimation by a power-of-two ratio through cascaded [1/4, 1/2, 1/4]
// half-band stages. Throws std::invalid_argument if from_hz / to_hz is not
// an integral power of two.
std::vector<double> resample_pow2(std::span<const double> samples, int from_hz, int to_hz);

// Frames produced by a centered STFT (frame_size/2 zeros on each side).
int frame_count(std::size_t n_samples, int frame_size, int hop_length);

// In-place forward DFT. Radix-2 when the size is a power of two, direct
// evaluation otherwise.
void dft(std::vector<std::complex<double>>& x);

// Periodic Hann window of length n.
std::vector<double> hann_window(int n);

// Linear power spectrum |X_k|^2, rows = frame_size/2 + 1.
Matrix power_spectrum(std::span<const double> samples, const DspConfig& cfg);

// 10 * log10(max(x, 1e-10)), element-wise.
void to_decibels(Matrix& m);

FeatureTensor power_spectrogram(std::span<const double> samples, const DspConfig& cfg);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// n_mels x (frame_size/2 + 1) triangular filters with centers equally
// spaced on the mel scale between 0 and rate_hz/2.
Matrix mel_filterbank(const DspConfig& cfg, int rate_hz);

FeatureTensor mel_spectrogram(std::span<const double> samples, const DspConfig& cfg, int rate_hz);

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct2_orthonormal(std::span<const double> x);
std::vector<double> idct2_orthonormal(std::span<const double> coeffs);

// Column-wise DCT of a dB mel spectrogram, keeping the first n_mfcc rows.
FeatureTensor mfcc_from_mel_db(const Matrix& mel_db, int n_mfcc);

FeatureTensor mfcc(std::span<const double> samples, const DspConfig& cfg, int rate_hz);

// Shape of the features for `data` without touching audio.
FeatureShape feature_shape(const DataGenome& data, const DspConfig& cfg);

// Full pipeline: decimate to data.sample_rate_hz, fit to exactly
// round(window_s * sample_rate_hz) samples (truncate or zero-pad), then
// apply the preprocessing.
FeatureTensor extract_features(std::span<const double> samples, int source_rate_hz,
                               const DataGenome& data, const DspConfig& cfg);

}  // namespace danas::dsp

#endif  // DANAS_DSP_H_
