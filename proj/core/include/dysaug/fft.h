// dysaug/fft.h

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

#ifndef DYSAUG_FFT_H_
#define DYSAUG_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace dysaug {

bool IsPowerOfTwo(std::size_t n);

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t Size() const { return n_; }

  // In-place complex transform; inverse is scaled by 1/N.
  void Forward(std::span<std::complex<double>> data) const;
  void Inverse(std::span<std::complex<double>> data) const;

  // One-sided transform of a real frame: returns N/2 + 1 bins.
  void ForwardReal(std::span<const double> in,
                   std::vector<std::complex<double>> *out) const;
  // Inverse of ForwardReal. Imaginary parts of DC and Nyquist are ignored.
  void InverseReal(std::span<const std::complex<double>> in,
                   std::vector<double> *out) const;

 private:
  void Transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bitrev_;
  // Work buffer; a single Fft instance must not be shared across threads.
  mutable std::vector<std::complex<double>> scratch_;
};

}  // namespace dysaug

#endif  // DYSAUG_FFT_H_
