// core/src/stft.cc

// Copyright 2026  The dysaug Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "dysaug/stft.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dysaug/error.h"
#include "dysaug/fft.h"

namespace dysaug {

WindowKind ParseWindowKind(const std::string &name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect" || name == "rectangular") return WindowKind::kRectangular;
  throw InvalidArgument("unknown window kind '" + name + "'");
}

const char *WindowKindName(WindowKind kind) {
  return kind == WindowKind::kHann ? "hann" : "rectangular";
}

std::vector<double> MakeWindow(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::kHann) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

bool SatisfiesOverlapAdd(WindowKind kind, std::size_t frame_len,
                         std::size_t hop) {
  if (hop == 0 || hop > frame_len) return false;
  std::vector<double> w = MakeWindow(kind, frame_len);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t n = 0; n < hop; ++n) {
    double sum = 0.0;
    for (std::size_t i = n; i < frame_len; i += hop) sum += w[i] * w[i];
    lo = std::min(lo, sum);
    hi = std::max(hi, sum);
  }
  return hi > 0.0 && lo >= 1e-3 * hi;
}

Spectrogram::Spectrogram(std::size_t num_frames, std::size_t frame_len,
                         std::size_t hop, WindowKind window,
                         int sample_rate_hz, std::size_t num_samples)
    : num_frames_(num_frames),
      frame_len_(frame_len),
      hop_(hop),
      window_(window),
      sample_rate_hz_(sample_rate_hz),
      num_samples_(num_samples),
      bins_(num_frames * (frame_len / 2 + 1)) {}

Spectrogram Stft(const AudioBuffer &buffer, const StftOptions &opts) {
  const std::size_t n = opts.frame_len;
  if (!IsPowerOfTwo(n))
    throw InvalidArgument("Stft: frame_len must be a power of two, got " +
                          std::to_string(n));
  if (opts.hop == 0 || opts.hop > n)
    throw InvalidArgument("Stft: hop must be in [1, frame_len]");
  if (n % opts.hop != 0)
    throw InvalidArgument("Stft: hop must divide frame_len");

  const std::size_t len = buffer.Size();
  const std::size_t num_frames = (len + opts.hop - 1) / opts.hop;
  Spectrogram spec(num_frames, n, opts.hop, opts.window, buffer.SampleRate(),
                   len);
  const std::vector<double> window = MakeWindow(opts.window, n);
  const Fft fft(n);
  auto samples = buffer.Samples();

  std::vector<double> frame(n);
  std::vector<std::complex<double>> bins;
  for (std::size_t m = 0; m < num_frames; ++m) {
    // First sample of frame m in signal coordinates (may be negative).
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(m * opts.hop) -
                                 static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
      std::ptrdiff_t t = start + static_cast<std::ptrdiff_t>(i);
      double x = (t >= 0 && t < static_cast<std::ptrdiff_t>(len)) ? samples[t]
                                                                  : 0.0;
      frame[i] = x * window[i];
    }
    fft.ForwardReal(frame, &bins);
    std::copy(bins.begin(), bins.end(), spec.Frame(m).begin());
  }
  return spec;
}

AudioBuffer Istft(const Spectrogram &spec) {
  const std::size_t n = spec.FrameLength();
  const std::size_t hop = spec.Hop();
  if (!SatisfiesOverlapAdd(spec.Window(), n, hop))
    throw InvalidArgument(
        std::string("Istft: window/hop pair does not satisfy overlap-add (") +
        WindowKindName(spec.Window()) + ", frame " + std::to_string(n) +
        ", hop " + std::to_string(hop) + ")");

  const std::size_t len = spec.NumSamples();
  std::vector<double> out(len, 0.0), norm(len, 0.0);
  const std::vector<double> window = MakeWindow(spec.Window(), n);
  const Fft fft(n);
  std::vector<double> frame;
  for (std::size_t m = 0; m < spec.NumFrames(); ++m) {
    fft.InverseReal(spec.Frame(m), &frame);
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(m * hop) -
                                 static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
      std::ptrdiff_t t = start + static_cast<std::ptrdiff_t>(i);
      if (t < 0 || t >= static_cast<std::ptrdiff_t>(len)) continue;
      out[t] += frame[i] * window[i];
      norm[t] += window[i] * window[i];
    }
  }
  for (std::size_t t = 0; t < len; ++t)
    out[t] = norm[t] > 1e-10 ? out[t] / norm[t] : 0.0;
  return AudioBuffer(std::move(out), spec.SampleRate());
}

}  // namespace dysaug
