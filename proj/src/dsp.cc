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

#include "danas/dsp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

namespace danas::dsp {

namespace {

constexpr double kPowerFloor = 1e-10;

uint32_t read_u32(std::span<const uint8_t> b, std::size_t at) {
  return static_cast<uint32_t>(b[at]) | (static_cast<uint32_t>(b[at + 1]) << 8) |
         (static_cast<uint32_t>(b[at + 2]) << 16) | (static_cast<uint32_t>(b[at + 3]) << 24);
}

uint16_t read_u16(std::span<const uint8_t> b, std::size_t at) {
  return static_cast<uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const uint8_t> b, std::size_t at, const char (&tag)[5]) {
  return std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(at));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_tag(std::vector<uint8_t>& out, const char (&tag)[5]) { out.insert(out.end(), tag, tag + 4); }

// Zero-padded [1/4, 1/2, 1/4] smoothing followed by keeping even indices.
std::vector<double> halve(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y((n + 1) / 2);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const std::size_t i = 2 * j;
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] : 0.0;
    y[j] = 0.25 * left + 0.5 * x[i] + 0.25 * right;
  }
  return y;
}

void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t k = 0; k < len / 2; ++k) {
      const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        const auto u = a[i];
        const auto v = a[i + len / 2] * w;
        a[i] = u + v;
        a[i + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

std::vector<std::string> DspConfig::check() const {
  std::vector<std::string> problems;
  if (!(window_s >= 0.0) || !std::isfinite(window_s)) problems.push_back("window_s: must be >= 0");
  if (frame_size < 2) problems.push_back("frame_size: must be >= 2");
  if (hop_length < 1) problems.push_back("hop_length: must be >= 1");
  if (hop_length > frame_size) problems.push_back("hop_length: must be <= frame_size");
  if (n_mels < 1) problems.push_back("n_mels: must be >= 1");
  if (n_mfcc < 1) problems.push_back("n_mfcc: must be >= 1");
  if (n_mfcc > n_mels) problems.push_back("n_mfcc: must be <= n_mels");
  if (sample_bits < 1) problems.push_back("sample_bits: must be >= 1");
  if (source_rate_hz < 1) problems.push_back("source_rate_hz: must be >= 1");
  return problems;
}

uint64_t buffer_size_bytes(int sample_bits, int sample_rate_hz, double window_s) {
  const double bits = static_cast<double>(sample_bits) * sample_rate_hz * window_s;
  return static_cast<uint64_t>(std::ceil(bits / 8.0));
}

WavAudio parse_wav(std::span<const uint8_t> b) {
  using K = WavError::Kind;
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
    throw WavError(K::kMalformedHeader, "not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  uint16_t channels = 0;
  uint16_t bits = 0;
  uint16_t block_align = 0;
  uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const uint32_t size = read_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(b, pos, "fmt ")) {
      if (size < 16 || body + size > b.size()) {
        throw WavError(K::kMalformedHeader, "fmt chunk too short");
      }
      uint16_t format = read_u16(b, body);
      channels = read_u16(b, body + 2);
      rate = read_u32(b, body + 4);
      block_align = read_u16(b, body + 12);
      bits = read_u16(b, body + 14);
      if (format == 0xFFFE && size >= 40) format = read_u16(b, body + 24);  // extensible
      if (format != 1) {
        throw WavError(K::kUnsupportedEncoding,
                       "unsupported WAV encoding (format tag " + std::to_string(format) + ")");
      }
      if (bits != 16) {
        throw WavError(K::kUnsupportedEncoding,
                       "unsupported sample width " + std::to_string(bits) + " bits");
      }
      if (channels == 0 || rate == 0 || block_align != channels * 2) {
        throw WavError(K::kMalformedHeader, "inconsistent fmt chunk");
      }
      have_fmt = true;
    } else if (tag_is(b, pos, "data")) {
      if (!have_fmt) throw WavError(K::kMalformedHeader, "data chunk before fmt chunk");
      if (body + size > b.size()) {
        throw WavError(K::kTruncatedData, "data chunk declares " + std::to_string(size) +
                                              " bytes, " + std::to_string(b.size() - body) +
                                              " present");
      }
      if (size % block_align != 0) {
        throw WavError(K::kTruncatedData, "data chunk ends mid-frame");
      }
      WavAudio out;
      out.rate_hz = static_cast<int>(rate);
      const std::size_t frames = size / block_align;
      out.samples.resize(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        const auto raw = static_cast<int16_t>(read_u16(b, body + f * block_align));
        out.samples[f] = static_cast<double>(raw) / 32768.0;
      }
      return out;
    }
    pos = body + size + (size & 1u);
  }
  throw WavError(have_fmt ? K::kTruncatedData : K::kMalformedHeader,
                 have_fmt ? "missing data chunk" : "missing fmt chunk");
}

WavAudio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavError::Kind::kIo, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

std::vector<uint8_t> encode_wav_pcm16(std::span<const double> interleaved, int rate_hz, int channels) {
  const auto data_bytes = static_cast<uint32_t>(interleaved.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, static_cast<uint16_t>(channels));
  put_u32(out, static_cast<uint32_t>(rate_hz));
  put_u32(out, static_cast<uint32_t>(rate_hz * channels * 2));
  put_u16(out, static_cast<uint16_t>(channels * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : interleaved) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
  }
  return out;
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> interleaved,
                     int rate_hz, int channels) {
  const auto bytes = encode_wav_pcm16(interleaved, rate_hz, channels);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WavError(WavError::Kind::kIo, "cannot write " + path.string());
}

std::vector<double> resample_pow2(std::span<const double> samples, int from_hz, int to_hz) {
  if (from_hz <= 0 || to_hz <= 0 || from_hz % to_hz != 0 ||
      !std::has_single_bit(static_cast<unsigned>(from_hz / to_hz))) {
    throw std::invalid_argument("resample ratio " + std::to_string(from_hz) + "/" +
                                std::to_string(to_hz) + " is not a power of two");
  }
  std::vector<double> out(samples.begin(), samples.end());
  for (int ratio = from_hz / to_hz; ratio > 1; ratio /= 2) out = halve(out);
  return out;
}

int frame_count(std::size_t n_samples, int /*frame_size*/, int hop_length) {
  return 1 + static_cast<int>(n_samples / static_cast<std::size_t>(hop_length));
}

void dft(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  if (std::has_single_bit(n)) {
    fft_radix2(x);
    return;
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / n;
      acc += x[t] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  x = std::move(out);
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
  return w;
}

Matrix power_spectrum(std::span<const double> samples, const DspConfig& cfg) {
  const int n_fft = cfg.frame_size;
  const int pad = n_fft / 2;
  const int bins = n_fft / 2 + 1;
  const int frames = frame_count(samples.size(), n_fft, cfg.hop_length);
  const auto window = hann_window(n_fft);
  const auto len = static_cast<long>(samples.size());

  Matrix power(bins, frames);
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_fft));
  for (int f = 0; f < frames; ++f) {
    const long start = static_cast<long>(f) * cfg.hop_length - pad;
    for (int i = 0; i < n_fft; ++i) {
      const long src = start + i;
      const double s = (src >= 0 && src < len) ? samples[static_cast<std::size_t>(src)] : 0.0;
      buf[i] = s * window[i];
    }
    dft(buf);
    for (int k = 0; k < bins; ++k) power(k, f) = std::norm(buf[k]);
  }
  return power;
}

void to_decibels(Matrix& m) {
  for (double& v : m.data) v = 10.0 * std::log10(std::max(v, kPowerFloor));
}

FeatureTensor power_spectrogram(std::span<const double> samples, const DspConfig& cfg) {
  FeatureTensor out{power_spectrum(samples, cfg)};
  to_decibels(out.values);
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix mel_filterbank(const DspConfig& cfg, int rate_hz) {
  const int bins = cfg.frame_size / 2 + 1;
  const double top = hz_to_mel(rate_hz / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(edges.size() - 1));
  }
  Matrix bank(cfg.n_mels, bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m];
    const double center = edges[m + 1];
    const double hi = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * rate_hz / cfg.frame_size;
      const double rising = (f - lo) / (center - lo);
      const double falling = (hi - f) / (hi - center);
      bank(m, k) = std::max(0.0, std::min(rising, falling));
    }
  }
  return bank;
}

FeatureTensor mel_spectrogram(std::span<const double> samples, const DspConfig& cfg, int rate_hz) {
  const Matrix power = power_spectrum(samples, cfg);
  const Matrix bank = mel_filterbank(cfg, rate_hz);
  Matrix mel(cfg.n_mels, power.cols);
  for (int m = 0; m < bank.rows; ++m) {
    for (int k = 0; k < bank.cols; ++k) {
      const double w = bank(m, k);
      if (w == 0.0) continue;
      for (int t = 0; t < power.cols; ++t) mel(m, t) += w * power(k, t);
    }
  }
  to_decibels(mel);
  return FeatureTensor{std::move(mel)};
}

std::vector<double> dct2_orthonormal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * i + 1.0) / (2.0 * n));
    }
    out[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

std::vector<double> idct2_orthonormal(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += coeffs[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n)) *
             std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * i + 1.0) / (2.0 * n));
    }
    out[i] = acc;
  }
  return out;
}

FeatureTensor mfcc_from_mel_db(const Matrix& mel_db, int n_mfcc) {
  Matrix out(n_mfcc, mel_db.cols);
  std::vector<double> column(static_cast<std::size_t>(mel_db.rows));
  for (int t = 0; t < mel_db.cols; ++t) {
    for (int m = 0; m < mel_db.rows; ++m) column[m] = mel_db(m, t);
    const auto coeffs = dct2_orthonormal(column);
    for (int c = 0; c < n_mfcc; ++c) out(c, t) = coeffs[c];
  }
  return FeatureTensor{std::move(out)};
}

FeatureTensor mfcc(std::span<const double> samples, const DspConfig& cfg, int rate_hz) {
  return mfcc_from_mel_db(mel_spectrogram(samples, cfg, rate_hz).values, cfg.n_mfcc);
}

FeatureShape feature_shape(const DataGenome& data, const DspConfig& cfg) {
  const auto n = static_cast<std::size_t>(std::llround(cfg.window_s * data.sample_rate_hz));
  FeatureShape shape;
  shape.cols = frame_count(n, cfg.frame_size, cfg.hop_length);
  switch (data.preprocessing) {
    case Preprocessing::kSpectrogram:
      shape.rows = cfg.frame_size / 2 + 1;
      break;
    case Preprocessing::kMelSpectrogram:
      shape.rows = cfg.n_mels;
      break;
    case Preprocessing::kMfcc:
      shape.rows = cfg.n_mfcc;
      break;
  }
  return shape;
}

FeatureTensor extract_features(std::span<const double> samples, int source_rate_hz,
                               const DataGenome& data, const DspConfig& cfg) {
  auto signal = resample_pow2(samples, source_rate_hz, data.sample_rate_hz);
  signal.resize(static_cast<std::size_t>(std::llround(cfg.window_s * data.sample_rate_hz)), 0.0);
  switch (data.preprocessing) {
    case Preprocessing::kSpectrogram:
      return power_spectrogram(signal, cfg);
    case Preprocessing::kMelSpectrogram:
      return mel_spectrogram(signal, cfg, data.sample_rate_hz);
    case Preprocessing::kMfcc:
      return mfcc(signal, cfg, data.sample_rate_hz);
  }
  return {};
}

}  // namespace danas::dsp
