// tests/wsola-test.cc

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
#include <random>

#include "dysaug/wsola.h"
#include "test-util.h"

namespace dysaug {
namespace {

TEST(BestShiftTest, ZeroToleranceHasOneCandidate) {
  auto r = testing::WhiteNoise(64, 1);
  auto c = testing::WhiteNoise(64, 2);
  EXPECT_EQ(BestShift(c, r, 0, 64), 0);
}

TEST(BestShiftTest, FindsKnownDelay) {
  auto s = testing::WhiteNoise(2000, 3);
  const std::size_t tol = 32, overlap = 512, at = 600;
  std::span<const double> ref(s.data() + at, overlap);
  std::span<const double> region(s.data() + at - tol - 7, overlap + 2 * tol);
  EXPECT_EQ(BestShift(region, ref, tol, overlap), 7);
  EXPECT_EQ(testing::ExhaustiveBestShift(region, ref, tol, overlap), 7);
  std::span<const double> early(s.data() + at - tol + 11, overlap + 2 * tol);
  EXPECT_EQ(BestShift(early, ref, tol, overlap), -11);
}

TEST(BestShiftTest, PeriodicTieGoesToZero) {
  const std::size_t period = 16, tol = 40, overlap = 256;
  auto pattern = testing::WhiteNoise(period, 4);
  std::vector<double> s(2000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = pattern[i % period];
  std::span<const double> ref(s.data() + 320, overlap);
  // Misaligned by exactly one period: shifts -P, 0, +P all correlate fully.
  std::span<const double> region(s.data() + 320 - tol - period,
                                 overlap + 2 * tol);
  EXPECT_EQ(BestShift(region, ref, tol, overlap), 0);
}

TEST(BestShiftTest, AgreesWithExhaustiveScan) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t tol = rng() % 65;
    const std::size_t overlap = 16 + rng() % 300;
    auto src = testing::SpeechLike(overlap + 2 * tol + 400, 16000, rng());
    const std::size_t at = 200;
    std::vector<double> ref(src.begin() + at, src.begin() + at + overlap);
    const long delta = static_cast<long>(rng() % (2 * tol + 1)) - static_cast<long>(tol);
    std::vector<double> region(src.begin() + at - tol - delta,
                               src.begin() + at - tol - delta + overlap + 2 * tol);
    ASSERT_EQ(BestShift(region, ref, tol, overlap),
              testing::ExhaustiveBestShift(region, ref, tol, overlap))
        << "trial " << trial;
  }
}

TEST(BestShiftTest, SilentReferenceScoresZeroEverywhere) {
  std::vector<double> ref(100, 0.0);
  auto region = testing::WhiteNoise(140, 8);
  EXPECT_EQ(BestShift(region, ref, 20, 100), 0);
}

TEST(BestShiftTest, RejectsShortInputs) {
  std::vector<double> ref(50, 0.1), region(100, 0.1);
  EXPECT_THROW(BestShift(region, ref, 10, 64), InvalidArgument);
  EXPECT_THROW(BestShift(region, ref, 30, 50), InvalidArgument);
}

TEST(WsolaParamsTest, Validation) {
  EXPECT_NO_THROW(WsolaParams{}.Check());
  EXPECT_THROW((WsolaParams{511, 100}.Check()), InvalidArgument);
  EXPECT_THROW((WsolaParams{512, 300}.Check()), InvalidArgument);
  WsolaParams p = WsolaParams::FromMilliseconds(16000, 32.0, 8.0);
  EXPECT_EQ(p.frame_len, 512u);
  EXPECT_EQ(p.tolerance, 128u);
  EXPECT_EQ(p.SynthesisHop(), 256u);
  EXPECT_THROW(TempoFactor{0.4}.Check(), InvalidArgument);
  EXPECT_THROW(TempoFactor{2.5}.Check(), InvalidArgument);
}

TEST(TempoTest, UnitFactorKeepsTheSignal) {
  auto x = testing::SpeechLike(32000, 16000, 5);
  AudioBuffer y = TempoPerturb(AudioBuffer(x, 16000), {1.0});
  ASSERT_LE(std::abs(static_cast<long>(y.Size()) - 32000L), 512L);
  // Interior correlation.
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t t = 2000; t < 30000; ++t) {
    xy += x[t] * y[t];
    xx += x[t] * x[t];
    yy += y[t] * y[t];
  }
  EXPECT_GT(xy / std::sqrt(xx * yy), 0.99);
}

TEST(TempoTest, DurationContract) {
  auto x = testing::SpeechLike(80000, 16000, 6);
  AudioBuffer y = TempoPerturb(AudioBuffer(x, 16000), {1.1});
  EXPECT_LE(std::abs(static_cast<double>(y.Size()) - 72727.0), 512.0);
  EXPECT_EQ(y.Size(), 72727u);  // round(len / F)
}

TEST(TempoTest, SawtoothPitchPreserved) {
  auto x = testing::Sawtooth(200.0, 16000, 48000);
  AudioBuffer y = TempoPerturb(AudioBuffer(x, 16000), {0.9});
  EXPECT_LE(std::abs(static_cast<double>(y.Size()) - 48000 / 0.9), 512.0);
  auto mid = testing::Interior(y.Samples(), 16000, 1.0);
  const double peak = testing::PeakFrequency(mid, 16000, 1 << 16);
  EXPECT_NEAR(peak, 200.0, 0.02 * 200.0);
}

TEST(TempoTest, RejectsShortInput) {
  AudioBuffer b(std::vector<double>(100, 0.1), 16000);
  EXPECT_THROW(TempoPerturb(b, {1.1}), InvalidArgument);
  AudioBuffer ok(std::vector<double>(512, 0.1), 16000);
  EXPECT_THROW(TempoPerturb(ok, {3.0}), InvalidArgument);
}

}  // namespace
}  // namespace dysaug
