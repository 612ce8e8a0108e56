// core/src/fft.cc

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

#include "dysaug/fft.h"

#include <cmath>
#include <numbers>
#include <string>

#include "dysaug/error.h"

namespace dysaug {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n) {
  if (!IsPowerOfTwo(n))
    throw InvalidArgument("Fft: size must be a power of two, got " +
                          std::to_string(n));
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / n;
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
}

void Fft::Transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != n_)
    throw InvalidArgument("Fft: buffer size does not match transform size");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    std::size_t half = len / 2;
    std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddles_[k * stride];
        if (inverse) w = std::conj(w);
        std::complex<double> t = w * data[start + k + half];
        data[start + k + half] = data[start + k] - t;
        data[start + k] += t;
      }
    }
  }
  if (inverse) {
    double scale = 1.0 / static_cast<double>(n_);
    for (auto &v : data) v *= scale;
  }
}

void Fft::Forward(std::span<std::complex<double>> data) const {
  Transform(data, false);
}

void Fft::Inverse(std::span<std::complex<double>> data) const {
  Transform(data, true);
}

void Fft::ForwardReal(std::span<const double> in,
                      std::vector<std::complex<double>> *out) const {
  if (in.size() != n_)
    throw InvalidArgument("Fft::ForwardReal: input size mismatch");
  scratch_.assign(in.begin(), in.end());
  Transform(scratch_, false);
  out->assign(scratch_.begin(), scratch_.begin() + n_ / 2 + 1);
}

void Fft::InverseReal(std::span<const std::complex<double>> in,
                      std::vector<double> *out) const {
  if (in.size() != n_ / 2 + 1)
    throw InvalidArgument("Fft::InverseReal: expected N/2+1 bins");
  scratch_.resize(n_);
  scratch_[0] = in[0].real();
  for (std::size_t k = 1; k < n_ / 2; ++k) {
    scratch_[k] = in[k];
    scratch_[n_ - k] = std::conj(in[k]);
  }
  if (n_ > 1) scratch_[n_ / 2] = in[n_ / 2].real();
  Transform(scratch_, true);
  out->resize(n_);
  for (std::size_t i = 0; i < n_; ++i) (*out)[i] = scratch_[i].real();
}

}  // namespace dysaug
