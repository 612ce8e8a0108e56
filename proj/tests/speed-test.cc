// tests/speed-test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dysaug/speed.h"
#include "test-util.h"

namespace dysaug {
namespace {

double Centroid(std::span<const double> x, int rate) {
  auto p = testing::PowerSpectrum(x);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    num += p[k] * static_cast<double>(k);
    den += p[k];
  }
  return num / den * rate / static_cast<double>(x.size());
}

double Rms(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

TEST(SpeedTest, OutputLengthLaw) {
  EXPECT_EQ(SpeedOutputLength(16000, 1.1), 14545u);
  EXPECT_EQ(SpeedOutputLength(32000, 0.9), 35556u);
  EXPECT_EQ(SpeedOutputLength(16000, 1.0), 16000u);
  EXPECT_EQ(SpeedOutputLength(3, 2.0), 2u);  // 1.5 rounds half up
  EXPECT_EQ(SpeedOutputLength(1, 2.0), 1u);
}

TEST(SpeedTest, KernelShape) {
  ResamplerParams p;
  SincKernel k(p, 1.0);
  EXPECT_DOUBLE_EQ(k(0.0), 1.0);
  for (int i = 1; i < p.taps_per_side; ++i) {
    EXPECT_EQ(k(static_cast<double>(i)), 0.0);
    EXPECT_EQ(k(-static_cast<double>(i)), 0.0);
  }
  EXPECT_DOUBLE_EQ(k.HalfWidth(), 32.0);
  EXPECT_EQ(k(32.5), 0.0);
  for (double u : {0.3, 1.7, 12.25}) EXPECT_DOUBLE_EQ(k(u), k(-u));
  // Close to the analytic windowed sinc between table points.
  const double u = 0.5;
  const double sinc = std::sin(M_PI * u) / (M_PI * u);
  EXPECT_NEAR(k(u), sinc, 1e-3);

  SincKernel lp(p, 0.5);
  EXPECT_DOUBLE_EQ(lp(0.0), 0.5);
  EXPECT_DOUBLE_EQ(lp.HalfWidth(), 64.0);
  EXPECT_EQ(lp(2.0), 0.0);
}

TEST(SpeedTest, UnitFactorIsIdentity) {
  auto x = testing::SpeechLike(20000, 16000, 8);
  AudioBuffer y = SpeedPerturb(AudioBuffer(x, 16000), {1.0});
  ASSERT_EQ(y.Size(), x.size());
  std::span<const double> xi(x.data() + 64, x.size() - 128);
  std::span<const double> yi(y.Samples().data() + 64, x.size() - 128);
  EXPECT_LT(testing::RelativeRms(xi, yi), 1e-6);
}

TEST(SpeedTest, ToneScalesWithFactor) {
  auto x = testing::Sine(440.0, 16000, 16000);
  AudioBuffer y = SpeedPerturb(AudioBuffer(x, 16000), {1.1});
  ASSERT_EQ(y.Size(), 14545u);
  // Zero-padded to 16000 points: bin width 1 Hz.
  const double peak = testing::PeakFrequency(y.Samples(), 16000, 16000);
  EXPECT_NEAR(peak, 484.0, 1.0);
}

TEST(SpeedTest, CentroidScales) {
  auto x = testing::SpeechLike(32000, 16000, 9);
  AudioBuffer y = SpeedPerturb(AudioBuffer(x, 16000), {0.9});
  ASSERT_EQ(y.Size(), 35556u);
  const double ratio = Centroid(y.Samples(), 16000) / Centroid(x, 16000);
  EXPECT_NEAR(ratio, 0.9, 0.03 * 0.9);
}

TEST(SpeedTest, PassbandToneKeepsAmplitude) {
  auto x = testing::Sine(3000.0, 16000, 32000);
  AudioBuffer y = SpeedPerturb(AudioBuffer(x, 16000), {1.15});
  const double ratio = Rms(testing::Interior(y.Samples(), 16000, 1.0)) /
                       Rms(testing::Interior(x, 16000, 1.0));
  EXPECT_NEAR(ratio, 1.0, 0.01);
}

TEST(SpeedTest, NoAliasingWhenSpeedingUp) {
  // 7500 Hz * 1.15 lands above Nyquist; without the low-pass it would fold
  // back to 7375 Hz at full strength.
  auto x = testing::Sine(7500.0, 16000, 48000);
  AudioBuffer y = SpeedPerturb(AudioBuffer(x, 16000), {1.15});
  auto mid = testing::Interior(y.Samples(), 16000, 1.0);
  const double db = 20.0 * std::log10(Rms(mid) / Rms(x) + 1e-300);
  EXPECT_LT(db, -60.0);
}

TEST(SpeedTest, Validation) {
  EXPECT_THROW(SpeedPerturb(AudioBuffer({}, 16000), {1.1}), InvalidArgument);
  AudioBuffer b(std::vector<double>(10, 0.1), 16000);
  EXPECT_THROW(SpeedPerturb(b, {0.3}), InvalidArgument);
  EXPECT_THROW(SpeedPerturb(b, {1.1}, {0, 12.0, 0.95}), InvalidArgument);
  EXPECT_THROW(SpeedPerturb(b, {1.1}, {32, 12.0, 1.5}), InvalidArgument);
}

}  // namespace
}  // namespace dysaug
