// dysaug/audio-buffer.h

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

#ifndef DYSAUG_AUDIO_BUFFER_H_
#define DYSAUG_AUDIO_BUFFER_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dysaug/error.h"

namespace dysaug {

/// Mono waveform with its sample rate. Samples are nominally in [-1, 1].
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<double> samples, int sample_rate_hz);

  std::span<const double> Samples() const { return samples_; }
  std::vector<double> &MutableSamples() { return samples_; }
  int SampleRate() const { return sample_rate_hz_; }

  std::size_t Size() const { return samples_.size(); }
  bool Empty() const { return samples_.empty(); }

  /// Exactly Size() / SampleRate().
  double DurationSeconds() const;

  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_ = 16000;
};

}  // namespace dysaug

#endif  // DYSAUG_AUDIO_BUFFER_H_
