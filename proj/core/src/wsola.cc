// core/src/wsola.cc

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

#include "dysaug/wsola.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "dysaug/error.h"

namespace dysaug {

namespace {

constexpr double kMinEnergy = 1e-12;
constexpr double kMinWindowSum = 1e-3;

double NormalizedCorrelation(const double *a, const double *b,
                             std::size_t n) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa < kMinEnergy || bb < kMinEnergy) return 0.0;
  return ab / std::sqrt(aa * bb);
}

}  // namespace

void WsolaParams::Check() const {
  if (frame_len < 2 || frame_len % 2 != 0)
    throw InvalidArgument("WsolaParams: frame_len must be even and >= 2, got " +
                          std::to_string(frame_len));
  if (tolerance > SynthesisHop())
    throw InvalidArgument("WsolaParams: tolerance " + std::to_string(tolerance) +
                          " exceeds synthesis hop " +
                          std::to_string(SynthesisHop()));
}

WsolaParams WsolaParams::FromMilliseconds(int sample_rate_hz, double frame_ms,
                                          double tolerance_ms) {
  if (frame_ms <= 0.0 || tolerance_ms < 0.0)
    throw InvalidArgument("WsolaParams: frame and tolerance must be positive");
  WsolaParams p;
  auto half = std::lround(frame_ms * sample_rate_hz / 2000.0);
  p.frame_len = static_cast<std::size_t>(std::max<long>(1, half)) * 2;
  p.tolerance =
      static_cast<std::size_t>(std::lround(tolerance_ms * sample_rate_hz / 1000.0));
  p.Check();
  return p;
}

void TempoFactor::Check() const {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw InvalidArgument("TempoFactor: factor must be in [0.5, 2.0], got " +
                          std::to_string(factor));
}

int BestShift(std::span<const double> region,
              std::span<const double> reference, std::size_t tolerance,
              std::size_t overlap) {
  if (overlap == 0 || reference.size() < overlap)
    throw InvalidArgument("BestShift: reference shorter than the overlap (" +
                          std::to_string(reference.size()) + " < " +
                          std::to_string(overlap) + ")");
  if (region.size() < overlap + 2 * tolerance)
    throw InvalidArgument("BestShift: candidate region too short");

  const int tol = static_cast<int>(tolerance);
  int best = 0;
  double best_score =
      NormalizedCorrelation(region.data() + tol, reference.data(), overlap);
  // Visiting 0, -1, +1, -2, +2, ... and replacing only on a strict
  // improvement implements the tie rule.
  for (int mag = 1; mag <= tol; ++mag) {
    for (int shift : {-mag, mag}) {
      double score = NormalizedCorrelation(region.data() + tol + shift,
                                           reference.data(), overlap);
      if (score > best_score) {
        best_score = score;
        best = shift;
      }
    }
  }
  return best;
}

AudioBuffer TempoPerturb(const AudioBuffer &buffer, TempoFactor factor,
                         const WsolaParams &params) {
  params.Check();
  factor.Check();
  const std::size_t n = params.frame_len;
  if (buffer.Size() < n)
    throw InvalidArgument("TempoPerturb: buffer shorter than one frame (" +
                          std::to_string(buffer.Size()) + " < " +
                          std::to_string(n) + ")");

  const std::size_t syn_hop = params.SynthesisHop();
  const std::size_t ana_hop = static_cast<std::size_t>(
      std::lround(static_cast<double>(syn_hop) * factor.factor));
  const std::size_t overlap = params.Overlap();
  const std::size_t tol = params.tolerance;
  const std::size_t len_in = buffer.Size();
  const std::size_t len_out = static_cast<std::size_t>(
      std::floor(static_cast<double>(len_in) / factor.factor + 0.5));

  // Frame m is centered on input sample m * ana_hop + shift and on output
  // sample m * syn_hop. The input is padded so every candidate is in range.
  const std::size_t num_frames = len_out / syn_hop + 2;
  const std::size_t lead = tol + n / 2;
  std::vector<double> x(lead + (num_frames + 1) * ana_hop + n + 2 * tol, 0.0);
  std::copy(buffer.Samples().begin(), buffer.Samples().end(),
            x.begin() + lead);

  const std::vector<double> window = MakeWindow(params.window, n);
  std::vector<double> y((num_frames - 1) * syn_hop + n, 0.0);
  std::vector<double> wsum(y.size(), 0.0);

  // Start of the (shifted) analysis frame m inside x.
  auto frame_start = [&](std::size_t m, int shift) {
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(tol + m * ana_hop) +
                                    shift);
  };

  int prev_shift = 0;
  for (std::size_t m = 0; m < num_frames; ++m) {
    int shift = 0;
    if (m > 0) {
      // Natural continuation of the previously copied block.
      std::size_t ref_start = frame_start(m - 1, prev_shift) + syn_hop;
      std::span<const double> reference(x.data() + ref_start, overlap);
      std::span<const double> region(x.data() + m * ana_hop,
                                     overlap + 2 * tol);
      shift = BestShift(region, reference, tol, overlap);
    }
    const double *src = x.data() + frame_start(m, shift);
    double *dst = y.data() + m * syn_hop;
    double *ws = wsum.data() + m * syn_hop;
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] += window[i] * src[i];
      ws[i] += window[i];
    }
    prev_shift = shift;
  }

  std::vector<double> out(len_out);
  for (std::size_t t = 0; t < len_out; ++t) {
    std::size_t i = t + n / 2;
    out[t] = y[i] / std::max(wsum[i], kMinWindowSum);
  }
  return AudioBuffer(std::move(out), buffer.SampleRate());
}

}  // namespace dysaug
