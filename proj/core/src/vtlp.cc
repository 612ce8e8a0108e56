// core/src/vtlp.cc

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

#include "dysaug/vtlp.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "dysaug/error.h"

namespace dysaug {

namespace {

double PrincipalArg(double phase) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return phase - kTwoPi * std::round(phase / kTwoPi);
}

}  // namespace

void WarpSpec::Check(double nyquist) const {
  if (!(alpha >= 0.5 && alpha <= 2.0))
    throw InvalidArgument("WarpSpec: alpha must be in [0.5, 2.0], got " +
                          std::to_string(alpha));
  if (!(boundary_hz > 0.0 && boundary_hz < nyquist))
    throw InvalidArgument("WarpSpec: boundary_hz must be in (0, nyquist), got " +
                          std::to_string(boundary_hz));
}

double WarpSpec::Breakpoint() const {
  return std::min(boundary_hz, boundary_hz / alpha);
}

double WarpFrequency(double f, const WarpSpec &spec, double nyquist) {
  if (!(f >= 0.0 && f <= nyquist))
    throw InvalidArgument("WarpFrequency: f=" + std::to_string(f) +
                          " outside [0, nyquist]");
  const double b = spec.Breakpoint();
  if (f <= b) return spec.alpha * f;
  const double gb = spec.alpha * b;
  return gb + (f - b) * (nyquist - gb) / (nyquist - b);
}

double UnwarpFrequency(double u, const WarpSpec &spec, double nyquist) {
  const double b = spec.Breakpoint();
  const double gb = spec.alpha * b;
  if (u <= gb) return u / spec.alpha;
  return b + (u - gb) * (nyquist - b) / (nyquist - gb);
}

AudioBuffer VtlpPerturb(const AudioBuffer &buffer, const WarpSpec &spec,
                        const StftOptions &opts) {
  if (buffer.Empty()) throw InvalidArgument("VtlpPerturb: empty buffer");
  const double fs = buffer.SampleRate();
  const double nyquist = fs / 2.0;
  spec.Check(nyquist);

  Spectrogram in = Stft(buffer, opts);
  Spectrogram out(in.NumFrames(), in.FrameLength(), in.Hop(), in.Window(),
                  in.SampleRate(), in.NumSamples());
  const std::size_t num_bins = in.NumBins();
  const double n = static_cast<double>(in.FrameLength());
  const double hop = static_cast<double>(in.Hop());
  const double bin_hz = fs / n;

  // Fractional source bin for every output bin; constant over frames.
  std::vector<std::size_t> src_lo(num_bins), src_near(num_bins);
  std::vector<double> src_frac(num_bins);
  for (std::size_t k = 0; k < num_bins; ++k) {
    double f = std::min(k * bin_hz, nyquist);
    double pos = WarpFrequency(f, spec, nyquist) / bin_hz;
    pos = std::clamp(pos, 0.0, static_cast<double>(num_bins - 1));
    std::size_t lo = std::min(static_cast<std::size_t>(pos), num_bins - 2);
    src_lo[k] = lo;
    src_frac[k] = pos - lo;
    src_near[k] = static_cast<std::size_t>(std::lround(pos));
  }

  std::vector<double> mag(num_bins), phase(num_bins), prev_phase(num_bins);
  std::vector<double> inst_hz(num_bins), out_phase(num_bins);
  for (std::size_t m = 0; m < in.NumFrames(); ++m) {
    auto frame = in.Frame(m);
    for (std::size_t j = 0; j < num_bins; ++j) {
      mag[j] = std::abs(frame[j]);
      phase[j] = std::arg(frame[j]);
      double center = 2.0 * std::numbers::pi * j / n;  // rad / sample
      double omega = center;
      if (m > 0)
        omega += PrincipalArg(phase[j] - prev_phase[j] - center * hop) / hop;
      inst_hz[j] = omega * fs / (2.0 * std::numbers::pi);
    }

    auto dst = out.Frame(m);
    for (std::size_t k = 0; k < num_bins; ++k) {
      const std::size_t lo = src_lo[k];
      const double a = src_frac[k];
      const double amp = (1.0 - a) * mag[lo] + a * mag[lo + 1];
      if (m == 0) {
        out_phase[k] = phase[src_near[k]];
      } else {
        double src_hz = (1.0 - a) * inst_hz[lo] + a * inst_hz[lo + 1];
        double out_hz = UnwarpFrequency(src_hz, spec, nyquist);
        out_phase[k] = PrincipalArg(out_phase[k] +
                                    2.0 * std::numbers::pi * out_hz / fs * hop);
      }
      dst[k] = std::polar(amp, out_phase[k]);
    }
    prev_phase.swap(phase);
  }
  return Istft(out);
}

}  // namespace dysaug
