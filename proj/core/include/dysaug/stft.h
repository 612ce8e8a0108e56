// dysaug/stft.h

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

#ifndef DYSAUG_STFT_H_
#define DYSAUG_STFT_H_

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "dysaug/audio-buffer.h"

namespace dysaug {

enum class WindowKind { kRectangular, kHann };

WindowKind ParseWindowKind(const std::string &name);
const char *WindowKindName(WindowKind kind);

/// Periodic window of length n (the Hann variant sums to a constant under
/// hops of n/2 and n/4).
std::vector<double> MakeWindow(WindowKind kind, std::size_t n);

/// True when weighted overlap-add with squared-window normalization can
/// reconstruct the signal: the steady-state sum of w^2 over all frames
/// touching a sample never drops below 1e-3 of its maximum.
bool SatisfiesOverlapAdd(WindowKind kind, std::size_t frame_len,
                         std::size_t hop);

/// Complex one-sided short-time spectrum. Frame m is centered on sample
/// m * hop (the signal is zero padded by frame_len / 2 on both sides), so
/// there are exactly ceil(num_samples / hop) frames. With hop > frame_len / 2
/// the last few samples fall outside every frame.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t num_frames, std::size_t frame_len, std::size_t hop,
              WindowKind window, int sample_rate_hz, std::size_t num_samples);

  std::size_t NumFrames() const { return num_frames_; }
  std::size_t NumBins() const { return frame_len_ / 2 + 1; }
  std::size_t FrameLength() const { return frame_len_; }
  std::size_t Hop() const { return hop_; }
  WindowKind Window() const { return window_; }
  int SampleRate() const { return sample_rate_hz_; }
  std::size_t NumSamples() const { return num_samples_; }

  /// Center frequency of bin k in Hz.
  double BinHz(std::size_t k) const {
    return static_cast<double>(k) * sample_rate_hz_ / frame_len_;
  }

  std::span<std::complex<double>> Frame(std::size_t m) {
    return {bins_.data() + m * NumBins(), NumBins()};
  }
  std::span<const std::complex<double>> Frame(std::size_t m) const {
    return {bins_.data() + m * NumBins(), NumBins()};
  }

 private:
  std::size_t num_frames_ = 0;
  std::size_t frame_len_ = 0;
  std::size_t hop_ = 0;
  WindowKind window_ = WindowKind::kHann;
  int sample_rate_hz_ = 16000;
  std::size_t num_samples_ = 0;
  std::vector<std::complex<double>> bins_;
};

struct StftOptions {
  std::size_t frame_len = 512;
  std::size_t hop = 128;
  WindowKind window = WindowKind::kHann;
};

/// Throws InvalidArgument if frame_len is not a power of two, hop is zero,
/// hop > frame_len, or hop does not divide frame_len.
Spectrogram Stft(const AudioBuffer &buffer, const StftOptions &opts = {});

/// Weighted overlap-add resynthesis, normalized by the accumulated squared
/// window; returns exactly spec.NumSamples() samples. Throws InvalidArgument
/// when the window/hop pair fails SatisfiesOverlapAdd.
AudioBuffer Istft(const Spectrogram &spec);

}  // namespace dysaug

#endif  // DYSAUG_STFT_H_
