// tests/toy-nnet-test.cc

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
#include <fstream>
#include <map>
#include <random>

#include "dysaug/toy-nnet.h"
#include "test-util.h"

namespace dysaug {
namespace nnet {
namespace {

NetworkConfig Tiny() {
  NetworkConfig c;
  c.input_dim = 4;
  c.hidden_dims = {8, 8, 8, 8, 8, 8, 8};
  c.bottleneck_dim = 4;
  c.n_triphone_targets = 3;
  c.n_monophone_targets = 2;
  return c;
}

FrameBatch RandomBatch(const NetworkConfig &c, int frames, uint64_t seed,
                       const std::string &spk = "s") {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  FrameBatch b;
  b.speaker_id = spk;
  b.features.resize(frames, c.input_dim);
  for (Eigen::Index i = 0; i < b.features.size(); ++i) b.features.data()[i] = n(rng);
  for (int t = 0; t < frames; ++t) {
    b.triphone_labels.push_back(static_cast<int>(rng() % c.n_triphone_targets));
    b.monophone_labels.push_back(static_cast<int>(rng() % c.n_monophone_targets));
  }
  return b;
}

// Perturb the stored statistics so eval-mode batch norm is not the identity.
void RandomizeStats(NetworkParams *p, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto &l : p->layers)
    for (Eigen::Index i = 0; i < l.bn_mean.size(); ++i) {
      l.bn_mean(i) = 0.3 * u(rng);
      l.bn_var(i) = 0.5 + u(rng);
    }
}

// Second, loop-only implementation of the eval-mode forward pass.
std::vector<std::vector<double>> Softmax(const std::vector<std::vector<double>> &z) {
  auto out = z;
  for (auto &row : out) {
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double sum = 0.0;
    for (double &v : row) sum += (v = std::exp(v - mx));
    for (double &v : row) v /= sum;
  }
  return out;
}

using Rows = std::vector<std::vector<double>>;

Rows Affine(const Rows &x, const Matrix &w, const Vector *b) {
  Rows y(x.size(), std::vector<double>(w.rows(), 0.0));
  for (std::size_t t = 0; t < x.size(); ++t)
    for (Eigen::Index o = 0; o < w.rows(); ++o) {
      double acc = b ? (*b)(o) : 0.0;
      for (Eigen::Index i = 0; i < w.cols(); ++i) acc += w(o, i) * x[t][i];
      y[t][o] = acc;
    }
  return y;
}

std::pair<Rows, Rows> OracleForward(const Matrix &features, const NetworkConfig &c,
                                    const NetworkParams &p, const Vector *r) {
  Rows x(features.rows(), std::vector<double>(features.cols()));
  for (Eigen::Index t = 0; t < features.rows(); ++t)
    for (Eigen::Index i = 0; i < features.cols(); ++i) x[t][i] = features(t, i);
  std::vector<Rows> outs;
  for (int l = 1; l <= 7; ++l) {
    const HiddenLayer &L = p.layers[l - 1];
    Rows in = l == 1 ? x : outs.back();
    if (l == 3)
      for (std::size_t t = 0; t < in.size(); ++t)
        for (std::size_t i = 0; i < in[t].size(); ++i) in[t][i] += outs[0][t][i];
    if (l == 6)
      for (std::size_t t = 0; t < in.size(); ++t)
        for (std::size_t i = 0; i < in[t].size(); ++i) in[t][i] += outs[3][t][i];
    if (l >= 2 && l <= 6) in = Affine(in, L.bottleneck, nullptr);
    Rows h = Affine(in, L.weight, &L.bias);
    for (auto &row : h)
      for (std::size_t o = 0; o < row.size(); ++o) {
        double v = std::max(row[o], 0.0);
        double amp = (l == 1 && r) ? 2.0 / (1.0 + std::exp(-(*r)(o))) : 1.0;
        const double sd = std::sqrt(L.bn_var(o) + c.batchnorm_epsilon);
        if (c.lhuc_placement == LhucPlacement::kBeforeBatchNorm)
          row[o] = (amp * v - L.bn_mean(o)) / sd;
        else
          row[o] = amp * (v - L.bn_mean(o)) / sd;
      }
    outs.push_back(h);
  }
  return {Softmax(Affine(outs.back(), p.triphone_weight, &p.triphone_bias)),
          Softmax(Affine(outs.back(), p.monophone_weight, &p.monophone_bias))};
}

TEST(ConfigTest, Validation) {
  EXPECT_NO_THROW(NetworkConfig{}.Check());
  NetworkConfig full = NetworkConfig::FullScale(4000, 40);
  EXPECT_NO_THROW(full.Check());
  EXPECT_EQ(full.hidden_dims[0], 2000);
  EXPECT_EQ(full.hidden_dims[6], 100);
  EXPECT_EQ(full.bottleneck_dim, 200);
  EXPECT_EQ(full.input_dim, 720);
  EXPECT_DOUBLE_EQ(full.dropout_rate, 0.2);

  NetworkConfig c;
  c.hidden_dims.pop_back();
  EXPECT_THROW(c.Check(), InvalidArgument);
  c = NetworkConfig{};
  c.dropout_rate = 1.0;
  EXPECT_THROW(c.Check(), InvalidArgument);
  c = NetworkConfig{};
  c.skip_connections = {{2, 3}};
  EXPECT_THROW(c.Check(), InvalidArgument);
  c = NetworkConfig{};
  c.hidden_dims[1] = 10;  // layer 2 output can no longer be summed with layer 1
  EXPECT_THROW(c.Check(), InvalidArgument);
  EXPECT_THROW(MtlWeights{1.5}.Check(), InvalidArgument);
}

TEST(SpliceTest, Examples) {
  Matrix one(1, 3);
  one << 1, 2, 3;
  Matrix s = SpliceContext(one, 4);
  ASSERT_EQ(s.rows(), 1);
  ASSERT_EQ(s.cols(), 27);
  for (int k = 0; k < 9; ++k)
    EXPECT_EQ(s.block(0, 3 * k, 1, 3), one) << k;

  Matrix id = Matrix::Random(5, 2);
  EXPECT_EQ(SpliceContext(id, 0), id);

  Matrix f(3, 2);
  f << 1, 2, 3, 4, 5, 6;
  Matrix want(3, 6);
  want << 1, 2, 1, 2, 3, 4,
          1, 2, 3, 4, 5, 6,
          3, 4, 5, 6, 5, 6;
  EXPECT_EQ(SpliceContext(f, 1), want);
  EXPECT_THROW(SpliceContext(Matrix(0, 2), 1), InvalidArgument);
}

TEST(ForwardTest, PosteriorsAreDistributions) {
  NetworkConfig c;
  NetworkParams p = InitParams(c, 3);
  FrameBatch b = RandomBatch(c, 30, 4);
  std::mt19937_64 rng(1);
  for (Mode m : {Mode::kEval, Mode::kTrain}) {
    Posteriors post = Forward(b, c, p, nullptr, m, &rng);
    ASSERT_EQ(post.triphone.rows(), 30);
    for (Eigen::Index t = 0; t < 30; ++t) {
      EXPECT_NEAR(post.triphone.row(t).sum(), 1.0, 1e-6);
      EXPECT_NEAR(post.monophone.row(t).sum(), 1.0, 1e-6);
    }
  }
  EXPECT_THROW(Forward(b, c, p, nullptr, Mode::kTrain, nullptr), InvalidArgument);
  FrameBatch wrong = RandomBatch(Tiny(), 3, 1);
  EXPECT_THROW(Forward(wrong, c, p, nullptr, Mode::kEval), InvalidArgument);
}

TEST(ForwardTest, LhucAtZeroIsBitwiseIdentity) {
  for (auto placement : {LhucPlacement::kAfterBatchNorm, LhucPlacement::kBeforeBatchNorm}) {
    NetworkConfig c;
    c.lhuc_placement = placement;
    NetworkParams p = InitParams(c, 5);
    RandomizeStats(&p, 6);
    FrameBatch b = RandomBatch(c, 20, 7, "spk");
    LhucTable table;
    table.GetOrAdd("spk", c.hidden_dims[0]);
    for (Mode m : {Mode::kEval, Mode::kTrain}) {
      std::mt19937_64 r1(9), r2(9);
      Posteriors a = Forward(b, c, p, nullptr, m, &r1);
      Posteriors z = Forward(b, c, p, &table, m, &r2);
      EXPECT_TRUE((a.triphone.array() == z.triphone.array()).all());
      EXPECT_TRUE((a.monophone.array() == z.monophone.array()).all());
    }
  }
}

TEST(ForwardTest, MatchesLoopImplementation) {
  for (auto placement : {LhucPlacement::kAfterBatchNorm, LhucPlacement::kBeforeBatchNorm}) {
    NetworkConfig c = Tiny();
    c.lhuc_placement = placement;
    NetworkParams p = InitParams(c, 11);
    RandomizeStats(&p, 12);
    FrameBatch b = RandomBatch(c, 6, 13, "x");
    LhucTable table;
    Vector &r = table.GetOrAdd("x", 8);
    r = Vector::LinSpaced(8, -1.5, 1.5);
    for (bool with_lhuc : {false, true}) {
      Posteriors got = Forward(b, c, p, with_lhuc ? &table : nullptr, Mode::kEval);
      auto [tri, mono] = OracleForward(b.features, c, p, with_lhuc ? &r : nullptr);
      for (int t = 0; t < 6; ++t) {
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(got.triphone(t, k), tri[t][k], 1e-10);
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(got.monophone(t, k), mono[t][k], 1e-10);
      }
    }
  }
}

TEST(ForwardTest, SkipPathCarriesSignal) {
  NetworkConfig c;
  NetworkParams p = InitParams(c, 21);
  p.layers[1].weight.setZero();  // cut the 1 -> 2 -> 3 path
  FrameBatch a = RandomBatch(c, 8, 22), b = RandomBatch(c, 8, 23);
  Posteriors pa = Forward(a, c, p, nullptr, Mode::kEval);
  Posteriors pb = Forward(b, c, p, nullptr, Mode::kEval);
  EXPECT_GT((pa.triphone - pb.triphone).cwiseAbs().maxCoeff(), 1e-6);

  NetworkConfig no_skip = c;
  no_skip.skip_connections.clear();
  Posteriors qa = Forward(a, no_skip, p, nullptr, Mode::kEval);
  Posteriors qb = Forward(b, no_skip, p, nullptr, Mode::kEval);
  EXPECT_EQ((qa.triphone - qb.triphone).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LossTest, MtlEndpointsAreExact) {
  NetworkConfig c;
  NetworkParams p = InitParams(c, 31);
  FrameBatch b = RandomBatch(c, 25, 32);
  Posteriors post = Forward(b, c, p, nullptr, Mode::kEval);
  const double tri = CrossEntropy(post.triphone, b.triphone_labels);
  const double mono = CrossEntropy(post.monophone, b.monophone_labels);
  EXPECT_EQ(MtlLoss(post, b.triphone_labels, b.monophone_labels, {1.0}), tri);
  EXPECT_EQ(MtlLoss(post, b.triphone_labels, b.monophone_labels, {0.0}), mono);
  EXPECT_NEAR(MtlLoss(post, b.triphone_labels, b.monophone_labels, {0.5}),
              0.5 * (tri + mono), 1e-15);
  Matrix uniform = Matrix::Constant(2, 4, 0.25);
  EXPECT_NEAR(CrossEntropy(uniform, {0, 3}), std::log(4.0), 1e-15);
}

TEST(GradientTest, MatchesFiniteDifferences) {
  for (auto placement : {LhucPlacement::kAfterBatchNorm, LhucPlacement::kBeforeBatchNorm}) {
    for (Mode bn : {Mode::kEval, Mode::kTrain}) {
      NetworkConfig c;
      c.lhuc_placement = placement;
      GradientCheckOptions o;
      o.batchnorm_mode = bn;
      GradientCheckResult r = GradientCheck(c, o);
      EXPECT_GE(r.num_checked, 200);
      EXPECT_GT(r.num_lhuc_checked, 0);
      EXPECT_LT(r.max_relative_error, 1e-4)
          << "placement " << static_cast<int>(placement) << " bn "
          << static_cast<int>(bn);
    }
  }
}

TEST(GradientTest, LhucAtZeroAndTinyNetwork) {
  GradientCheckOptions o;
  o.lhuc_at_zero = true;
  GradientCheckResult r = GradientCheck(NetworkConfig{}, o);
  EXPECT_EQ(r.num_lhuc_checked, 64);
  EXPECT_LT(r.max_lhuc_relative_error, 1e-4);

  GradientCheckOptions t;
  t.num_params = 200;
  GradientCheckResult tiny = GradientCheck(Tiny(), t);
  EXPECT_LT(tiny.max_relative_error, 1e-4);
}

TEST(GradientTest, TriphoneOnlyLossLeavesMonophoneHeadAlone) {
  GradientCheckOptions o;
  o.weights.lambda = 1.0;
  GradientCheckResult r = GradientCheck(NetworkConfig{}, o);
  ASSERT_FALSE(r.monophone_head_gradient.empty());
  for (double g : r.monophone_head_gradient) ASSERT_EQ(g, 0.0);
}

TEST(OptimizerTest, SgdAndRmsProp) {
  std::vector<double> p = {1.0, -2.0}, g = {0.5, 0.25};
  Optimizer sgd({OptimizerSettings::Kind::kSgd, 0.1});
  sgd.Step(p, g, "w");
  EXPECT_DOUBLE_EQ(p[0], 0.95);
  EXPECT_DOUBLE_EQ(p[1], -2.025);

  std::vector<double> q = {1.0};
  Optimizer rms({OptimizerSettings::Kind::kRmsProp, 0.01, 0.9, 1e-8});
  rms.Step(q, std::vector<double>{2.0}, "w");
  // ms = 0.1 * 4 = 0.4; step = 0.01 * 2 / (sqrt(0.4) + 1e-8)
  EXPECT_NEAR(q[0], 1.0 - 0.02 / (std::sqrt(0.4) + 1e-8), 1e-15);
  rms.Step(q, std::vector<double>{2.0}, "w");
  const double ms2 = 0.9 * 0.4 + 0.1 * 4.0;
  EXPECT_NEAR(q[0], 1.0 - 0.02 / (std::sqrt(0.4) + 1e-8) -
                        0.02 / (std::sqrt(ms2) + 1e-8), 1e-15);
  EXPECT_THROW(rms.Step(q, std::vector<double>{1.0, 2.0}, "w"), InvalidArgument);
}

TEST(TrainTest, LossDecreasesAndUpdatesAreAttributed) {
  NetworkConfig c;
  SyntheticCorpusOptions d;
  d.batches_per_speaker = 5;
  auto batches = MakeSyntheticCorpus(c, d);
  ASSERT_EQ(batches.size(), 10u);
  TrainOptions o;
  o.epochs = 1;
  TrainResult one = TrainSat(batches, c, o);
  ASSERT_EQ(one.lhuc_updates.size(), 10u);
  std::map<std::string, int> per;
  for (const auto &s : one.lhuc_updates) ++per[s];
  EXPECT_EQ(per["spk0"], 5);
  EXPECT_EQ(per["spk1"], 5);
  EXPECT_EQ(one.lhuc.speakers.size(), 2u);

  o.epochs = 8;
  TrainResult r = TrainSat(batches, c, o);
  EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
  EXPECT_THROW(TrainSat({}, c, o), InvalidArgument);
}

TEST(TrainTest, FrozenIdentityLhucEqualsSpeakerIndependent) {
  NetworkConfig c;
  SyntheticCorpusOptions d;
  d.num_speakers = 1;
  d.batches_per_speaker = 6;
  auto batches = MakeSyntheticCorpus(c, d);
  TrainOptions sat;
  sat.epochs = 3;
  sat.freeze_lhuc = true;
  TrainOptions si = sat;
  si.use_lhuc = false;
  TrainResult a = TrainSat(batches, c, sat);
  TrainResult b = TrainSat(batches, c, si);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
  EXPECT_EQ(ParamsChecksum(a.params), ParamsChecksum(b.params));
  EXPECT_TRUE(a.lhuc_updates.empty());
}

TEST(TrainTest, SatNoWorseThanSiOnGainMismatchedSpeakers) {
  NetworkConfig c;
  SyntheticCorpusOptions d;
  auto batches = MakeSyntheticCorpus(c, d);
  TrainOptions sat;
  sat.epochs = 12;
  TrainOptions si = sat;
  si.use_lhuc = false;
  TrainResult a = TrainSat(batches, c, sat);
  TrainResult b = TrainSat(batches, c, si);
  const double sat_loss = EvaluateLoss(batches, c, a.params, &a.lhuc, sat.weights);
  const double si_loss = EvaluateLoss(batches, c, b.params, nullptr, si.weights);
  EXPECT_LE(sat_loss, si_loss);
}

TEST(AdaptTest, ReducesLossOnlyTouchingTargetSpeaker) {
  NetworkConfig c;
  SyntheticCorpusOptions d;
  auto batches = MakeSyntheticCorpus(c, d);
  TrainOptions o;
  o.epochs = 6;
  TrainResult model = TrainSat(batches, c, o);

  // New speaker: spk0 with every input doubled.
  std::vector<FrameBatch> mismatch;
  for (const auto &b : batches)
    if (b.speaker_id == "spk0") {
      FrameBatch m = b;
      m.features *= 2.0;
      m.speaker_id = "new";
      mismatch.push_back(m);
    }
  LhucTable table = model.lhuc;
  const uint64_t before_params = ParamsChecksum(model.params);
  const Vector spk1 = table.speakers.at("spk1");

  AdaptOptions zero;
  zero.passes = 0;
  AdaptSpeaker(mismatch, "new", c, model.params, zero, &table);
  EXPECT_EQ(table.speakers.at("new"), Vector::Zero(64));
  const double unadapted = EvaluateLoss(mismatch, c, model.params, &table, o.weights);
  EXPECT_EQ(unadapted, EvaluateLoss(mismatch, c, model.params, nullptr, o.weights));

  AdaptOptions a;
  a.passes = 3;
  AdaptSpeaker(mismatch, "new", c, model.params, a, &table);
  const double adapted = EvaluateLoss(mismatch, c, model.params, &table, o.weights);
  EXPECT_LT(adapted, unadapted);
  EXPECT_EQ(ParamsChecksum(model.params), before_params);
  EXPECT_EQ(table.speakers.at("spk1"), spk1);
  EXPECT_EQ(table.speakers.at("spk0"), model.lhuc.speakers.at("spk0"));

  EXPECT_THROW(AdaptSpeaker(batches, "new", c, model.params, a, &table),
               InvalidArgument);
}

TEST(ModelFileTest, RoundTrip) {
  NetworkConfig c;
  c.lhuc_placement = LhucPlacement::kBeforeBatchNorm;
  ModelFile m{c, InitParams(c, 41), {}};
  RandomizeStats(&m.params, 42);
  m.lhuc.GetOrAdd("F02", 64).setConstant(0.25);
  testing::TempDir dir("model");
  SaveModel(m, dir / "m.bin");
  ModelFile back = LoadModel(dir / "m.bin");
  EXPECT_EQ(ParamsChecksum(back.params), ParamsChecksum(m.params));
  EXPECT_EQ(back.config.hidden_dims, c.hidden_dims);
  EXPECT_EQ(back.config.skip_connections, c.skip_connections);
  EXPECT_EQ(back.config.lhuc_placement, LhucPlacement::kBeforeBatchNorm);
  EXPECT_EQ(back.lhuc.speakers.at("F02"), m.lhuc.speakers.at("F02"));

  std::ofstream(dir / "bad.bin") << "NOTAMODEL";
  EXPECT_THROW(LoadModel(dir / "bad.bin"), InvalidArgument);
  EXPECT_THROW(LoadModel(dir / "absent.bin"), InvalidArgument);
}

TEST(SyntheticTest, ShapesAndDeterminism) {
  NetworkConfig c;
  SyntheticCorpusOptions d;
  auto a = MakeSyntheticCorpus(c, d);
  auto b = MakeSyntheticCorpus(c, d);
  ASSERT_EQ(a.size(), 20u);
  EXPECT_EQ(a[0].features, b[0].features);
  EXPECT_EQ(a[0].features.cols(), 36);
  for (std::size_t t = 0; t < a[3].triphone_labels.size(); ++t)
    EXPECT_EQ(a[3].monophone_labels[t], a[3].triphone_labels[t] % 10);
  d.context = 3;
  EXPECT_THROW(MakeSyntheticCorpus(c, d), InvalidArgument);
}

}  // namespace
}  // namespace nnet
}  // namespace dysaug
