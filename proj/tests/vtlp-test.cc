// tests/vtlp-test.cc

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

#include "dysaug/vtlp.h"
#include "test-util.h"

namespace dysaug {
namespace {

constexpr double kNyq = 8000.0;

TEST(WarpTest, Examples) {
  EXPECT_DOUBLE_EQ(WarpFrequency(0.0, {1.3, 4800.0}, kNyq), 0.0);
  EXPECT_DOUBLE_EQ(WarpFrequency(1234.5, {1.0, 4800.0}, kNyq), 1234.5);
  EXPECT_NEAR(WarpFrequency(1000.0, {1.1, 4800.0}, kNyq), 1100.0, 1e-9);
  EXPECT_DOUBLE_EQ(WarpFrequency(kNyq, {0.9, 4800.0}, kNyq), kNyq);
  EXPECT_NEAR(WarpSpec({1.1, 4800.0}).Breakpoint(), 4800.0 / 1.1, 1e-9);
  EXPECT_NEAR(WarpSpec({0.9, 4800.0}).Breakpoint(), 4800.0, 1e-9);
}

TEST(WarpTest, ContinuousMonotoneAndInvertible) {
  for (double alpha : {0.5, 0.8, 0.9, 1.0, 1.1, 1.25, 2.0}) {
    for (double boundary : {1000.0, 4800.0, 7000.0}) {
      WarpSpec spec{alpha, boundary};
      const double b = spec.Breakpoint();
      // Continuity at the breakpoint from both sides.
      const double lo = WarpFrequency(b - 1e-7, spec, kNyq);
      const double hi = WarpFrequency(b + 1e-7, spec, kNyq);
      EXPECT_NEAR(lo, hi, 1e-5) << alpha << " " << boundary;
      EXPECT_NEAR(WarpFrequency(b, spec, kNyq), alpha * b, 1e-9);
      double prev = -1.0;
      for (int i = 0; i <= 800; ++i) {
        const double f = kNyq * i / 800.0;
        const double g = WarpFrequency(f, spec, kNyq);
        EXPECT_GT(g, prev);
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, kNyq + 1e-9);
        EXPECT_NEAR(UnwarpFrequency(g, spec, kNyq), f, 1e-9);
        prev = g;
      }
    }
  }
}

TEST(WarpTest, Validation) {
  EXPECT_THROW(WarpFrequency(-1.0, {1.1, 4800.0}, kNyq), InvalidArgument);
  EXPECT_THROW(WarpFrequency(kNyq + 1.0, {1.1, 4800.0}, kNyq), InvalidArgument);
  EXPECT_THROW(WarpSpec({0.4, 4800.0}).Check(kNyq), InvalidArgument);
  EXPECT_THROW(WarpSpec({2.1, 4800.0}).Check(kNyq), InvalidArgument);
  EXPECT_THROW(WarpSpec({1.1, 8000.0}).Check(kNyq), InvalidArgument);
  EXPECT_THROW(WarpSpec({1.1, 0.0}).Check(kNyq), InvalidArgument);
  EXPECT_NO_THROW(WarpSpec({1.1, 4800.0}).Check(kNyq));
  AudioBuffer b(testing::Sine(500, 16000, 4000), 16000);
  EXPECT_THROW(VtlpPerturb(b, {3.0, 4800.0}), InvalidArgument);
}

TEST(VtlpTest, UnitAlphaIsStftRoundTrip) {
  auto x = testing::SpeechLike(16000, 16000, 21);
  AudioBuffer y = VtlpPerturb(AudioBuffer(x, 16000), {1.0, 4800.0});
  ASSERT_EQ(y.Size(), x.size());
  EXPECT_LT(testing::RelativeRms(x, y.Samples()), 1e-6);
}

TEST(VtlpTest, ToneMovesToInverseWarp) {
  const int rate = 16000;
  auto x = testing::Sine(1000.0, rate, rate);
  struct Case {
    double alpha, expect_hz;
  };
  for (Case c : {Case{1.1, 1000.0 / 1.1}, Case{0.9, 1000.0 / 0.9}}) {
    AudioBuffer y = VtlpPerturb(AudioBuffer(x, rate), {c.alpha, 4800.0});
    ASSERT_EQ(y.Size(), 16000u);
    // One-second rectangular FFT: bins are 1 Hz wide.
    const double peak =
        testing::PeakFrequency(y.Samples(), rate, rate, /*hann=*/false);
    EXPECT_NEAR(peak, c.expect_hz, 1.0) << "alpha " << c.alpha;
  }
}

TEST(VtlpTest, LengthPreservedForAnyLength) {
  for (std::size_t n : {513u, 1000u, 16001u, 40000u}) {
    auto x = testing::SpeechLike(n, 16000, n);
    for (double alpha : {0.85, 1.15}) {
      AudioBuffer y = VtlpPerturb(AudioBuffer(x, 16000), {alpha, 4800.0});
      EXPECT_EQ(y.Size(), n);
      EXPECT_EQ(y.SampleRate(), 16000);
      for (double v : y.Samples()) ASSERT_TRUE(std::isfinite(v));
    }
  }
}

TEST(VtlpTest, SilenceStaysSilent) {
  AudioBuffer y =
      VtlpPerturb(AudioBuffer(std::vector<double>(5000, 0.0), 16000), {1.1});
  for (double v : y.Samples()) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace dysaug
