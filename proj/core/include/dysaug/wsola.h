// dysaug/wsola.h

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

#ifndef DYSAUG_WSOLA_H_
#define DYSAUG_WSOLA_H_

#include <cstddef>
#include <span>

#include "dysaug/audio-buffer.h"
#include "dysaug/stft.h"

namespace dysaug {

/// Block geometry for waveform-similarity overlap-add. The synthesis hop is
/// held at frame_len / 2 so that Hann windows sum to one; the analysis hop is
/// derived from the tempo factor.
struct WsolaParams {
  std::size_t frame_len = 512;
  std::size_t tolerance = 128;  // max |shift| in samples
  WindowKind window = WindowKind::kHann;

  std::size_t SynthesisHop() const { return frame_len / 2; }
  std::size_t Overlap() const { return frame_len - SynthesisHop(); }

  /// Throws InvalidArgument unless frame_len is even and >= 2 and
  /// tolerance <= SynthesisHop().
  void Check() const;

  /// Frame and tolerance given in milliseconds; frame_len rounded to even.
  static WsolaParams FromMilliseconds(int sample_rate_hz, double frame_ms,
                                      double tolerance_ms);
};

/// User-facing tempo factor: F > 1 plays faster (shorter output). The
/// internal stretch ratio is 1/F.
struct TempoFactor {
  double factor = 1.0;
  void Check() const;  // 0.5 <= F <= 2
};

/// Returns the shift in [-tolerance, tolerance] that maximizes the normalized
/// cross-correlation between region[tolerance + shift, + overlap) and
/// reference[0, overlap). Ties go to the smallest |shift|, then to the
/// negative shift. A side whose energy is below 1e-12 correlates as 0.
///
/// region must hold at least overlap + 2 * tolerance samples; throws
/// InvalidArgument if it does not, or if reference is shorter than overlap.
int BestShift(std::span<const double> region,
              std::span<const double> reference, std::size_t tolerance,
              std::size_t overlap);

/// Tempo perturbation: output length is round(len / F) and the pitch of
/// steady tones is unchanged. Requires at least frame_len input samples.
AudioBuffer TempoPerturb(const AudioBuffer &buffer, TempoFactor factor,
                         const WsolaParams &params = {});

}  // namespace dysaug

#endif  // DYSAUG_WSOLA_H_
