// dysaug/vtlp.h

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

#ifndef DYSAUG_VTLP_H_
#define DYSAUG_VTLP_H_

#include "dysaug/audio-buffer.h"
#include "dysaug/stft.h"

namespace dysaug {

/// Frequency warp for vocal tract length perturbation. The output spectrum at
/// frequency f is read from the input at g(f) = alpha * f up to the
/// breakpoint min(boundary_hz, boundary_hz / alpha); above it g is the line
/// through (breakpoint, alpha * breakpoint) and (nyquist, nyquist).
struct WarpSpec {
  double alpha = 1.0;
  double boundary_hz = 4800.0;

  /// Throws InvalidArgument unless 0.5 <= alpha <= 2 and
  /// 0 < boundary_hz < nyquist.
  void Check(double nyquist) const;

  double Breakpoint() const;
};

/// g(f): source frequency whose value populates output frequency f.
/// Throws InvalidArgument if f is outside [0, nyquist].
double WarpFrequency(double f, const WarpSpec &spec, double nyquist);

/// g^-1(u); extended linearly outside [0, nyquist].
double UnwarpFrequency(double u, const WarpSpec &spec, double nyquist);

/// Y(f) = X(g(f)) applied frame by frame on an STFT, resynthesized by
/// overlap-add. The output has exactly as many samples as the input.
///
/// Magnitudes are linearly interpolated between adjacent source bins. Phases
/// are propagated phase-vocoder style: the instantaneous frequency measured
/// at the source position is mapped through g^-1 and accumulated over hops,
/// so a tone at f0 is resynthesized as a coherent tone at g^-1(f0) rather
/// than as a burst train at the frame rate.
AudioBuffer VtlpPerturb(const AudioBuffer &buffer, const WarpSpec &spec,
                        const StftOptions &opts = {});

}  // namespace dysaug

#endif  // DYSAUG_VTLP_H_
