// core/src/toy-nnet.cc

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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "dysaug/toy-nnet.h"

namespace dysaug {
namespace nnet {

namespace {

// Everything the backward pass needs from one hidden layer.
struct LayerCache {
  Matrix input;    // after skip addition
  Matrix reduced;  // bottleneck output (or a copy of input)
  Matrix preact;
  Matrix relu;
  Matrix bn_in;    // what batch norm normalized
  Matrix normed;   // (bn_in - mean) * inv_std
  Matrix scaled;   // after LHUC (== normed or relu-side scaling applied)
  Matrix mask;     // dropout mask incl. 1/(1-p); empty when not applied
  Matrix output;
  Vector mean;
  Vector var;
  Vector inv_std;
};

struct ForwardResult {
  std::vector<LayerCache> layers;
  Posteriors post;
};

void CheckBatch(const FrameBatch &batch, const NetworkConfig &config,
                bool need_labels) {
  if (batch.features.cols() != config.input_dim)
    throw InvalidArgument("batch has " + std::to_string(batch.features.cols()) +
                          " feature columns, network expects " +
                          std::to_string(config.input_dim));
  if (batch.features.rows() == 0) throw InvalidArgument("empty batch");
  if (!need_labels) return;
  const auto t = static_cast<std::size_t>(batch.features.rows());
  if (batch.triphone_labels.size() != t || batch.monophone_labels.size() != t)
    throw InvalidArgument("label count does not match frame count");
  for (std::size_t i = 0; i < t; ++i) {
    if (batch.triphone_labels[i] < 0 ||
        batch.triphone_labels[i] >= config.n_triphone_targets ||
        batch.monophone_labels[i] < 0 ||
        batch.monophone_labels[i] >= config.n_monophone_targets)
      throw InvalidArgument("label out of range at frame " + std::to_string(i));
  }
}

void CheckParams(const NetworkConfig &config, const NetworkParams &params) {
  if (params.layers.size() != kNumHiddenLayers)
    throw InvalidArgument("parameter set does not have 7 hidden layers");
  int in = config.input_dim;
  for (int l = 1; l <= kNumHiddenLayers; ++l) {
    const HiddenLayer &layer = params.layers[l - 1];
    int width = in;
    if (config.HasBottleneck(l)) {
      if (layer.bottleneck.rows() != config.bottleneck_dim ||
          layer.bottleneck.cols() != in)
        throw InvalidArgument("bottleneck shape mismatch in layer " +
                              std::to_string(l));
      width = config.bottleneck_dim;
    }
    const int units = config.hidden_dims[l - 1];
    if (layer.weight.rows() != units || layer.weight.cols() != width ||
        layer.bias.size() != units || layer.bn_mean.size() != units ||
        layer.bn_var.size() != units)
      throw InvalidArgument("affine shape mismatch in layer " +
                            std::to_string(l));
    in = units;
  }
  if (params.triphone_weight.rows() != config.n_triphone_targets ||
      params.triphone_weight.cols() != in ||
      params.triphone_bias.size() != config.n_triphone_targets ||
      params.monophone_weight.rows() != config.n_monophone_targets ||
      params.monophone_weight.cols() != in ||
      params.monophone_bias.size() != config.n_monophone_targets)
    throw InvalidArgument("output head shape mismatch");
}

Matrix Softmax(const Matrix &logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    const double mx = logits.row(t).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(t).array() - mx).exp().matrix();
    out.row(t) = e / e.sum();
  }
  return out;
}

Matrix DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate,
                   std::mt19937_64 *rng) {
  Matrix mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
      mask(r, c) = u >= rate ? keep_scale : 0.0;
    }
  return mask;
}

ForwardResult RunForward(const Matrix &features, const NetworkConfig &config,
                         const NetworkParams &params, const Vector *lhuc_r,
                         Mode mode, std::mt19937_64 *rng) {
  const bool dropout = mode == Mode::kTrain && config.dropout_rate > 0.0;
  if (dropout && rng == nullptr)
    throw InvalidArgument("training-mode forward with dropout needs an RNG");
  if (lhuc_r && lhuc_r->size() != config.hidden_dims[0])
    throw InvalidArgument("LHUC vector size does not match layer 1");

  ForwardResult res;
  res.layers.resize(kNumHiddenLayers);
  const Eigen::Index frames = features.rows();
  for (int l = 1; l <= kNumHiddenLayers; ++l) {
    const HiddenLayer &p = params.layers[l - 1];
    LayerCache &c = res.layers[l - 1];
    c.input = l == 1 ? features : res.layers[l - 2].output;
    for (const auto &[from, to] : config.skip_connections)
      if (to == l) c.input += res.layers[from - 1].output;

    c.reduced = config.HasBottleneck(l) ? Matrix(c.input * p.bottleneck.transpose())
                                        : c.input;
    c.preact = c.reduced * p.weight.transpose();
    c.preact.rowwise() += p.bias.transpose();
    c.relu = c.preact.cwiseMax(0.0);

    const bool scale_here = l == 1 && lhuc_r != nullptr;
    Eigen::RowVectorXd amp;
    if (scale_here) amp = LhucAmplitude(*lhuc_r).transpose();
    const bool before_bn =
        config.lhuc_placement == LhucPlacement::kBeforeBatchNorm;

    c.bn_in = (scale_here && before_bn)
                  ? Matrix(c.relu.array().rowwise() * amp.array())
                  : c.relu;
    if (mode == Mode::kTrain) {
      c.mean = c.bn_in.colwise().mean().transpose();
      c.var = (c.bn_in.rowwise() - c.mean.transpose())
                  .array()
                  .square()
                  .colwise()
                  .mean()
                  .transpose();
    } else {
      c.mean = p.bn_mean;
      c.var = p.bn_var;
    }
    c.inv_std = (c.var.array() + config.batchnorm_epsilon).rsqrt().matrix();
    c.normed = ((c.bn_in.rowwise() - c.mean.transpose()).array().rowwise() *
                c.inv_std.transpose().array())
                   .matrix();
    c.scaled = (scale_here && !before_bn)
                   ? Matrix(c.normed.array().rowwise() * amp.array())
                   : c.normed;

    if (dropout && config.HasDropout(l)) {
      c.mask = DropoutMask(frames, c.scaled.cols(), config.dropout_rate, rng);
      c.output = c.scaled.cwiseProduct(c.mask);
    } else {
      c.mask.resize(0, 0);
      c.output = c.scaled;
    }
  }

  const Matrix &top = res.layers.back().output;
  Matrix tri = top * params.triphone_weight.transpose();
  tri.rowwise() += params.triphone_bias.transpose();
  Matrix mono = top * params.monophone_weight.transpose();
  mono.rowwise() += params.monophone_bias.transpose();
  res.post.triphone = Softmax(tri);
  res.post.monophone = Softmax(mono);
  return res;
}

}  // namespace

void NetworkConfig::Check() const {
  if (input_dim <= 0) throw InvalidArgument("NetworkConfig: input_dim <= 0");
  if (hidden_dims.size() != kNumHiddenLayers)
    throw InvalidArgument("NetworkConfig: exactly 7 hidden layers required");
  for (int h : hidden_dims)
    if (h <= 0) throw InvalidArgument("NetworkConfig: empty hidden layer");
  if (bottleneck_dim <= 0)
    throw InvalidArgument("NetworkConfig: bottleneck_dim <= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
    throw InvalidArgument("NetworkConfig: dropout_rate must be in [0, 1)");
  if (n_triphone_targets < 1 || n_monophone_targets < 1)
    throw InvalidArgument("NetworkConfig: need at least one target per head");
  if (!(batchnorm_epsilon > 0.0))
    throw InvalidArgument("NetworkConfig: batchnorm_epsilon must be > 0");
  if (!(batchnorm_momentum >= 0.0 && batchnorm_momentum < 1.0))
    throw InvalidArgument("NetworkConfig: batchnorm_momentum must be in [0, 1)");
  for (const auto &[from, to] : skip_connections) {
    if (from < 1 || to > kNumHiddenLayers || to <= from + 1)
      throw InvalidArgument("NetworkConfig: skip (" + std::to_string(from) +
                            "," + std::to_string(to) +
                            ") must satisfy 1 <= from < to - 1 <= 6");
    if (hidden_dims[from - 1] != hidden_dims[to - 2])
      throw InvalidArgument("NetworkConfig: skip (" + std::to_string(from) +
                            "," + std::to_string(to) +
                            ") joins layers of different width");
  }
}

NetworkConfig NetworkConfig::FullScale(int n_triphone_targets,
                                        int n_monophone_targets) {
  NetworkConfig c;
  c.input_dim = 80 * 9;
  c.hidden_dims = {2000, 2000, 2000, 2000, 2000, 2000, 100};
  c.bottleneck_dim = 200;
  c.dropout_rate = 0.2;
  c.n_triphone_targets = n_triphone_targets;
  c.n_monophone_targets = n_monophone_targets;
  return c;
}

std::vector<std::span<double>> NetworkParams::Trainable() {
  std::vector<std::span<double>> out;
  auto add = [&](auto &m) {
    if (m.size() > 0) out.emplace_back(m.data(), static_cast<std::size_t>(m.size()));
  };
  for (auto &l : layers) {
    add(l.bottleneck);
    add(l.weight);
    add(l.bias);
  }
  add(triphone_weight);
  add(triphone_bias);
  add(monophone_weight);
  add(monophone_bias);
  return out;
}

std::vector<std::span<double>> NetworkParams::All() {
  std::vector<std::span<double>> out;
  auto add = [&](auto &m) {
    if (m.size() > 0) out.emplace_back(m.data(), static_cast<std::size_t>(m.size()));
  };
  for (auto &l : layers) {
    add(l.bottleneck);
    add(l.weight);
    add(l.bias);
    add(l.bn_mean);
    add(l.bn_var);
  }
  add(triphone_weight);
  add(triphone_bias);
  add(monophone_weight);
  add(monophone_bias);
  return out;
}

std::vector<std::span<const double>> NetworkParams::All() const {
  auto spans = const_cast<NetworkParams *>(this)->All();
  return {spans.begin(), spans.end()};
}

NetworkParams NetworkParams::ZerosLike() const {
  NetworkParams z = *this;
  for (auto s : z.All()) std::fill(s.begin(), s.end(), 0.0);
  return z;
}

NetworkParams InitParams(const NetworkConfig &config, uint64_t seed) {
  config.Check();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random = [&](int rows, int cols, double scale) {
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = scale * normal(rng);
    return m;
  };

  NetworkParams p;
  int in = config.input_dim;
  for (int l = 1; l <= kNumHiddenLayers; ++l) {
    HiddenLayer layer;
    int width = in;
    if (config.HasBottleneck(l)) {
      layer.bottleneck = random(config.bottleneck_dim, in, 1.0 / std::sqrt(in));
      width = config.bottleneck_dim;
    }
    const int units = config.hidden_dims[l - 1];
    layer.weight = random(units, width, std::sqrt(2.0 / width));
    layer.bias = Vector::Constant(units, 0.1);
    layer.bn_mean = Vector::Zero(units);
    layer.bn_var = Vector::Ones(units);
    p.layers.push_back(std::move(layer));
    in = units;
  }
  p.triphone_weight = random(config.n_triphone_targets, in, 1.0 / std::sqrt(in));
  p.triphone_bias = Vector::Zero(config.n_triphone_targets);
  p.monophone_weight = random(config.n_monophone_targets, in, 1.0 / std::sqrt(in));
  p.monophone_bias = Vector::Zero(config.n_monophone_targets);
  return p;
}

Vector &LhucTable::GetOrAdd(const std::string &speaker, int dim) {
  auto it = speakers.find(speaker);
  if (it == speakers.end()) it = speakers.emplace(speaker, Vector::Zero(dim)).first;
  return it->second;
}

Vector LhucAmplitude(const Vector &r) {
  return (2.0 / (1.0 + (-r.array()).exp())).matrix();
}

void MtlWeights::Check() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("MtlWeights: lambda must be in [0, 1]");
}

Matrix SpliceContext(const Matrix &frames, int context) {
  if (frames.rows() < 1) throw InvalidArgument("SpliceContext: no frames");
  if (context < 0) throw InvalidArgument("SpliceContext: negative context");
  const Eigen::Index t_max = frames.rows() - 1;
  const Eigen::Index d = frames.cols();
  const int width = 2 * context + 1;
  Matrix out(frames.rows(), d * width);
  for (Eigen::Index t = 0; t <= t_max; ++t)
    for (int k = 0; k < width; ++k) {
      Eigen::Index src = std::clamp<Eigen::Index>(t + k - context, 0, t_max);
      out.block(t, k * d, 1, d) = frames.row(src);
    }
  return out;
}

Posteriors Forward(const FrameBatch &batch, const NetworkConfig &config,
                   const NetworkParams &params, const LhucTable *lhuc,
                   Mode mode, std::mt19937_64 *rng) {
  config.Check();
  CheckBatch(batch, config, false);
  CheckParams(config, params);
  const Vector *r = nullptr;
  if (lhuc) {
    auto it = lhuc->speakers.find(batch.speaker_id);
    if (it == lhuc->speakers.end())
      throw InvalidArgument("no LHUC vector for speaker '" + batch.speaker_id +
                            "'");
    r = &it->second;
  }
  return RunForward(batch.features, config, params, r, mode, rng).post;
}

double CrossEntropy(const Matrix &posteriors, const std::vector<int> &labels) {
  if (static_cast<std::size_t>(posteriors.rows()) != labels.size())
    throw InvalidArgument("CrossEntropy: label count mismatch");
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t)
    sum -= std::log(std::max(posteriors(static_cast<Eigen::Index>(t), labels[t]),
                             1e-300));
  return sum / static_cast<double>(labels.size());
}

double MtlLoss(const Posteriors &post, const std::vector<int> &triphone_labels,
               const std::vector<int> &monophone_labels,
               const MtlWeights &weights) {
  weights.Check();
  const double tri = CrossEntropy(post.triphone, triphone_labels);
  const double mono = CrossEntropy(post.monophone, monophone_labels);
  if (weights.lambda == 1.0) return tri;
  if (weights.lambda == 0.0) return mono;
  return weights.lambda * tri + (1.0 - weights.lambda) * mono;
}

double ComputeLoss(const FrameBatch &batch, const NetworkConfig &config,
                   const NetworkParams &params, const Vector *lhuc_r,
                   Mode mode, const MtlWeights &weights,
                   std::mt19937_64 *rng) {
  CheckBatch(batch, config, true);
  auto res = RunForward(batch.features, config, params, lhuc_r, mode, rng);
  return MtlLoss(res.post, batch.triphone_labels, batch.monophone_labels,
                 weights);
}

BatchGradients ComputeGradients(const FrameBatch &batch,
                                const NetworkConfig &config,
                                const NetworkParams &params,
                                const Vector *lhuc_r, Mode mode,
                                const MtlWeights &weights,
                                std::mt19937_64 *rng) {
  weights.Check();
  CheckBatch(batch, config, true);
  CheckParams(config, params);
  ForwardResult fwd =
      RunForward(batch.features, config, params, lhuc_r, mode, rng);

  BatchGradients g;
  g.loss = MtlLoss(fwd.post, batch.triphone_labels, batch.monophone_labels,
                   weights);
  g.params = params.ZerosLike();
  const double frames = static_cast<double>(batch.features.rows());

  // Softmax + cross-entropy: d/dlogits = (p - onehot) / T, scaled per task.
  Matrix d_tri = fwd.post.triphone;
  Matrix d_mono = fwd.post.monophone;
  for (Eigen::Index t = 0; t < d_tri.rows(); ++t) {
    d_tri(t, batch.triphone_labels[t]) -= 1.0;
    d_mono(t, batch.monophone_labels[t]) -= 1.0;
  }
  d_tri *= weights.lambda / frames;
  d_mono *= (1.0 - weights.lambda) / frames;

  const Matrix &top = fwd.layers.back().output;
  g.params.triphone_weight = d_tri.transpose() * top;
  g.params.triphone_bias = d_tri.colwise().sum().transpose();
  g.params.monophone_weight = d_mono.transpose() * top;
  g.params.monophone_bias = d_mono.colwise().sum().transpose();

  std::vector<Matrix> d_out(kNumHiddenLayers);
  d_out[kNumHiddenLayers - 1] =
      d_tri * params.triphone_weight + d_mono * params.monophone_weight;

  const bool before_bn =
      config.lhuc_placement == LhucPlacement::kBeforeBatchNorm;
  for (int l = kNumHiddenLayers; l >= 1; --l) {
    const LayerCache &c = fwd.layers[l - 1];
    const HiddenLayer &p = params.layers[l - 1];
    HiddenLayer &gp = g.params.layers[l - 1];
    Matrix d = d_out[l - 1];
    if (d.size() == 0) d = Matrix::Zero(c.output.rows(), c.output.cols());
    if (c.mask.size() > 0) d = d.cwiseProduct(c.mask);

    const bool scale_here = l == 1 && lhuc_r != nullptr;
    Vector amp, d_amp;
    if (scale_here) amp = LhucAmplitude(*lhuc_r);

    // d is now d loss / d scaled.
    Matrix d_normed = d;
    if (scale_here && !before_bn) {
      d_amp = d.cwiseProduct(c.normed).colwise().sum().transpose();
      d_normed = d.array().rowwise() * amp.transpose().array();
    }

    Matrix d_bn_in;
    if (mode == Mode::kTrain) {
      Eigen::RowVectorXd mean_d = d_normed.colwise().mean();
      Eigen::RowVectorXd mean_dx =
          d_normed.cwiseProduct(c.normed).colwise().mean();
      Matrix centered = d_normed.rowwise() - mean_d;
      centered -= (c.normed.array().rowwise() * mean_dx.array()).matrix();
      d_bn_in = centered.array().rowwise() * c.inv_std.transpose().array();
    } else {
      d_bn_in = d_normed.array().rowwise() * c.inv_std.transpose().array();
    }

    Matrix d_relu = d_bn_in;
    if (scale_here && before_bn) {
      d_amp = d_bn_in.cwiseProduct(c.relu).colwise().sum().transpose();
      d_relu = d_bn_in.array().rowwise() * amp.transpose().array();
    }
    if (scale_here) {
      Vector sig = (amp.array() / 2.0).matrix();
      g.lhuc = (d_amp.array() * 2.0 * sig.array() * (1.0 - sig.array())).matrix();
    }

    Matrix d_pre = (c.preact.array() > 0.0).select(d_relu, 0.0);
    gp.weight = d_pre.transpose() * c.reduced;
    gp.bias = d_pre.colwise().sum().transpose();
    Matrix d_reduced = d_pre * p.weight;
    Matrix d_input;
    if (config.HasBottleneck(l)) {
      gp.bottleneck = d_reduced.transpose() * c.input;
      d_input = d_reduced * p.bottleneck;
    } else {
      d_input = std::move(d_reduced);
    }

    if (l > 1) {
      if (d_out[l - 2].size() == 0)
        d_out[l - 2] = d_input;
      else
        d_out[l - 2] += d_input;
    }
    for (const auto &[from, to] : config.skip_connections) {
      if (to != l) continue;
      if (d_out[from - 1].size() == 0)
        d_out[from - 1] = d_input;
      else
        d_out[from - 1] += d_input;
    }
  }

  if (mode == Mode::kTrain) {
    g.batch_mean.resize(kNumHiddenLayers);
    g.batch_var.resize(kNumHiddenLayers);
    for (int l = 0; l < kNumHiddenLayers; ++l) {
      g.batch_mean[l] = fwd.layers[l].mean;
      g.batch_var[l] = fwd.layers[l].var;
    }
  }
  return g;
}

namespace {

// ReLU on/off pattern; a finite difference that flips any unit straddles a
// kink and says nothing about the analytic gradient.
std::vector<bool> ActivationPattern(const ForwardResult &fwd) {
  std::vector<bool> bits;
  for (const LayerCache &c : fwd.layers)
    for (Eigen::Index i = 0; i < c.preact.size(); ++i)
      bits.push_back(c.preact.data()[i] > 0.0);
  return bits;
}

// Central differences of a loss near 3 carry roughly 1e-10 of absolute
// rounding noise at step 1e-5, so gradients below 1e-6 are compared on an
// absolute 1e-6 scale instead of their own.
constexpr double kGradientFloor = 1e-6;

double RelativeError(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), kGradientFloor});
  return std::abs(a - b) / scale;
}

}  // namespace

GradientCheckResult GradientCheck(const NetworkConfig &config_in,
                                  const GradientCheckOptions &opts) {
  NetworkConfig config = config_in;
  config.dropout_rate = 0.0;
  config.Check();
  opts.weights.Check();
  if (opts.num_params < 1 || opts.num_frames < 2 || !(opts.step > 0.0))
    throw InvalidArgument("GradientCheck: bad options");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  NetworkParams params = InitParams(config, opts.seed);
  for (auto &layer : params.layers) {
    for (Eigen::Index i = 0; i < layer.bn_mean.size(); ++i) {
      layer.bn_mean(i) = 0.5 * uniform(rng);
      layer.bn_var(i) = 0.5 + uniform(rng);
    }
  }
  FrameBatch batch;
  batch.speaker_id = "check";
  batch.features.resize(opts.num_frames, config.input_dim);
  for (Eigen::Index i = 0; i < batch.features.size(); ++i)
    batch.features.data()[i] = normal(rng);
  for (int t = 0; t < opts.num_frames; ++t) {
    batch.triphone_labels.push_back(
        static_cast<int>(rng() % static_cast<uint64_t>(config.n_triphone_targets)));
    batch.monophone_labels.push_back(static_cast<int>(
        rng() % static_cast<uint64_t>(config.n_monophone_targets)));
  }
  Vector r = Vector::Zero(config.hidden_dims[0]);
  if (!opts.lhuc_at_zero)
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = 0.5 * normal(rng);

  const Mode mode = opts.batchnorm_mode;
  BatchGradients g =
      ComputeGradients(batch, config, params, &r, mode, opts.weights);

  GradientCheckResult result;
  const Matrix &hw = g.params.monophone_weight;
  result.monophone_head_gradient.assign(hw.data(), hw.data() + hw.size());
  const Vector &hb = g.params.monophone_bias;
  result.monophone_head_gradient.insert(result.monophone_head_gradient.end(),
                                        hb.data(), hb.data() + hb.size());

  // Loss and kink pattern at the perturbed point.
  auto probe = [&](double *entry, double value, double *loss) {
    const double saved = *entry;
    *entry = value;
    ForwardResult fwd = RunForward(batch.features, config, params, &r, mode,
                                   nullptr);
    *entry = saved;
    *loss = MtlLoss(fwd.post, batch.triphone_labels, batch.monophone_labels,
                    opts.weights);
    return ActivationPattern(fwd);
  };
  // Returns false if the probe straddles a ReLU kink.
  auto check_entry = [&](double *entry, double analytic, double *err) {
    const double x = *entry;
    double lp = 0.0, lm = 0.0;
    auto pp = probe(entry, x + opts.step, &lp);
    auto pm = probe(entry, x - opts.step, &lm);
    if (pp != pm) return false;
    *err = RelativeError(analytic, (lp - lm) / (2.0 * opts.step));
    return true;
  };

  auto values = params.Trainable();
  auto grads = g.params.Trainable();
  std::size_t total = 0;
  for (auto s : values) total += s.size();
  int attempts = 0;
  while (result.num_checked < opts.num_params &&
         attempts < 20 * opts.num_params) {
    ++attempts;
    std::size_t flat = rng() % total, t = 0;
    while (flat >= values[t].size()) flat -= values[t++].size();
    double err = 0.0;
    if (!check_entry(&values[t][flat], grads[t][flat], &err)) continue;
    result.max_relative_error = std::max(result.max_relative_error, err);
    ++result.num_checked;
  }
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    double err = 0.0;
    if (!check_entry(&r(i), g.lhuc(i), &err)) continue;
    result.max_lhuc_relative_error =
        std::max(result.max_lhuc_relative_error, err);
    ++result.num_lhuc_checked;
  }
  result.max_relative_error =
      std::max(result.max_relative_error, result.max_lhuc_relative_error);
  return result;
}

uint64_t ParamsChecksum(const NetworkParams &params) {
  uint64_t h = 14695981039346656037ull;
  for (auto s : params.All()) {
    const auto *bytes = reinterpret_cast<const unsigned char *>(s.data());
    for (std::size_t i = 0; i < s.size_bytes(); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace nnet
}  // namespace dysaug
