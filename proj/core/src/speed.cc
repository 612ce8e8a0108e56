// core/src/speed.cc

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

#include "dysaug/speed.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dysaug/error.h"

namespace dysaug {

namespace {

// Zeroth-order modified Bessel function of the first kind, power series.
double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

void SpeedFactor::Check() const {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw InvalidArgument("SpeedFactor: factor must be in [0.5, 2.0], got " +
                          std::to_string(factor));
}

void ResamplerParams::Check() const {
  if (taps_per_side < 8)
    throw InvalidArgument("ResamplerParams: taps_per_side must be >= 8");
  if (!(cutoff_scale > 0.0 && cutoff_scale <= 1.0))
    throw InvalidArgument("ResamplerParams: cutoff_scale must be in (0, 1]");
  if (!(kaiser_beta >= 0.0))
    throw InvalidArgument("ResamplerParams: kaiser_beta must be >= 0");
}

SincKernel::SincKernel(const ResamplerParams &params, double cutoff)
    : cutoff_(cutoff),
      half_width_(params.taps_per_side / cutoff),
      taps_(params.taps_per_side),
      table_(static_cast<std::size_t>(params.taps_per_side) * kOversample + 2,
             0.0) {
  const double norm = BesselI0(params.kaiser_beta);
  const std::size_t last = static_cast<std::size_t>(taps_) * kOversample;
  for (std::size_t i = 0; i <= last; ++i) {
    double v = static_cast<double>(i) / kOversample;  // in zero crossings
    double sinc;
    if (i == 0)
      sinc = 1.0;
    else if (i % kOversample == 0)
      sinc = 0.0;
    else
      sinc = std::sin(std::numbers::pi * v) / (std::numbers::pi * v);
    double r = v / taps_;
    double win = BesselI0(params.kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    table_[i] = cutoff_ * sinc * win;
  }
}

double SincKernel::operator()(double u) const {
  double pos = std::abs(u) * cutoff_ * kOversample;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= static_cast<std::size_t>(taps_) * kOversample) return 0.0;
  double frac = pos - static_cast<double>(i);
  if (frac == 0.0) return table_[i];
  return table_[i] + frac * (table_[i + 1] - table_[i]);
}

std::size_t SpeedOutputLength(std::size_t len, double alpha) {
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(len) / alpha + 0.5));
}

AudioBuffer SpeedPerturb(const AudioBuffer &buffer, SpeedFactor factor,
                         const ResamplerParams &params) {
  if (buffer.Empty()) throw InvalidArgument("SpeedPerturb: empty buffer");
  factor.Check();
  params.Check();
  const double alpha = factor.factor;
  const double cutoff = alpha > 1.0 ? params.cutoff_scale / alpha : 1.0;
  const SincKernel kernel(params, cutoff);
  const double width = kernel.HalfWidth();

  auto x = buffer.Samples();
  const std::ptrdiff_t len_in = static_cast<std::ptrdiff_t>(x.size());
  const std::size_t len_out = SpeedOutputLength(x.size(), alpha);
  std::vector<double> y(len_out);
  for (std::size_t n = 0; n < len_out; ++n) {
    const double t = static_cast<double>(n) * alpha;
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(std::ceil(t - width));
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(std::floor(t + width));
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, len_in - 1);
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k)
      acc += x[k] * kernel(t - static_cast<double>(k));
    y[n] = acc;
  }
  return AudioBuffer(std::move(y), buffer.SampleRate());
}

}  // namespace dysaug
