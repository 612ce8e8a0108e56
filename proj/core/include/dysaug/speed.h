// dysaug/speed.h

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

#ifndef DYSAUG_SPEED_H_
#define DYSAUG_SPEED_H_

#include <cstddef>
#include <vector>

#include "dysaug/audio-buffer.h"

namespace dysaug {

/// alpha > 1 shortens the signal and raises every frequency by alpha.
struct SpeedFactor {
  double factor = 1.0;
  void Check() const;  // 0.5 <= alpha <= 2
};

/// Kaiser-windowed sinc interpolator settings. The kernel spans
/// taps_per_side zero crossings on each side of the interpolation point.
struct ResamplerParams {
  int taps_per_side = 32;
  double kaiser_beta = 12.0;
  double cutoff_scale = 0.95;

  void Check() const;
};

/// Band-limited interpolation kernel c * sinc(c * u) * kaiser(c * u / taps),
/// tabulated finely enough that linear interpolation between entries is far
/// below the window's stopband. Exact (0 or c) at integer zero crossings.
class SincKernel {
 public:
  SincKernel(const ResamplerParams &params, double cutoff);

  /// Kernel value at offset u input samples.
  double operator()(double u) const;
  /// Support half-width in input samples.
  double HalfWidth() const { return half_width_; }

 private:
  static constexpr int kOversample = 4096;
  double cutoff_;
  double half_width_;
  int taps_;
  std::vector<double> table_;  // indexed by |c * u| * kOversample
};

/// y(t) = x(alpha * t): output sample n interpolates the input at n * alpha.
/// For alpha > 1 the kernel low-passes at cutoff_scale / alpha of Nyquist.
/// The output keeps the input's nominal sample rate and has
/// round-half-up(len / alpha) samples. Amplitudes are not rescaled.
AudioBuffer SpeedPerturb(const AudioBuffer &buffer, SpeedFactor factor,
                         const ResamplerParams &params = {});

/// round-half-up(len / alpha), the output length of SpeedPerturb.
std::size_t SpeedOutputLength(std::size_t len, double alpha);

}  // namespace dysaug

#endif  // DYSAUG_SPEED_H_
