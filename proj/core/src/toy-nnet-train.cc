// core/src/toy-nnet-train.cc

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
#include <numeric>
#include <string>

#include "dysaug/toy-nnet.h"

namespace dysaug {
namespace nnet {

void Optimizer::Step(std::span<double> param, std::span<const double> grad,
                     const std::string &slot) {
  if (param.size() != grad.size())
    throw InvalidArgument("Optimizer: gradient size mismatch for " + slot);
  const double lr = settings_.learning_rate;
  if (settings_.kind == OptimizerSettings::Kind::kSgd) {
    for (std::size_t i = 0; i < param.size(); ++i) param[i] -= lr * grad[i];
    return;
  }
  auto it = mean_square_.find(slot);
  if (it == mean_square_.end())
    it = mean_square_
             .emplace(slot, Vector::Zero(static_cast<Eigen::Index>(param.size())))
             .first;
  Vector &ms = it->second;
  if (static_cast<std::size_t>(ms.size()) != param.size())
    throw InvalidArgument("Optimizer: slot " + slot + " changed size");
  const double decay = settings_.rms_decay;
  for (std::size_t i = 0; i < param.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    ms(k) = decay * ms(k) + (1.0 - decay) * grad[i] * grad[i];
    param[i] -= lr * grad[i] / (std::sqrt(ms(k)) + settings_.rms_epsilon);
  }
}

namespace {

void CheckSettings(const OptimizerSettings &s) {
  if (!(s.learning_rate > 0.0))
    throw InvalidArgument("learning rate must be positive");
  if (!(s.rms_decay >= 0.0 && s.rms_decay < 1.0) || !(s.rms_epsilon > 0.0))
    throw InvalidArgument("bad RMSProp settings");
}

void UpdateParams(NetworkParams *params, NetworkParams *grads,
                  Optimizer *opt) {
  auto p = params->Trainable();
  auto g = grads->Trainable();
  for (std::size_t i = 0; i < p.size(); ++i)
    opt->Step(p[i], g[i], "param" + std::to_string(i));
}

}  // namespace

TrainResult TrainSat(const std::vector<FrameBatch> &batches,
                     const NetworkConfig &config, const TrainOptions &options,
                     std::optional<NetworkParams> init) {
  config.Check();
  options.weights.Check();
  CheckSettings(options.optimizer);
  if (batches.empty()) throw InvalidArgument("TrainSat: no training batches");
  if (options.epochs < 1) throw InvalidArgument("TrainSat: epochs < 1");

  TrainResult res;
  res.params = init ? std::move(*init) : InitParams(config, options.seed);
  Optimizer opt(options.optimizer);
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(batches.size());
  std::iota(order.begin(), order.end(), 0);
  const double m = config.batchnorm_momentum;
  const int lhuc_dim = config.hidden_dims[0];

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t idx : order) {
      const FrameBatch &b = batches[idx];
      Vector *r = options.use_lhuc ? &res.lhuc.GetOrAdd(b.speaker_id, lhuc_dim)
                                   : nullptr;
      BatchGradients g = ComputeGradients(b, config, res.params, r,
                                          Mode::kTrain, options.weights, &rng);
      total += g.loss;
      UpdateParams(&res.params, &g.params, &opt);
      if (r && !options.freeze_lhuc) {
        opt.Step({r->data(), static_cast<std::size_t>(r->size())},
                 {g.lhuc.data(), static_cast<std::size_t>(g.lhuc.size())},
                 "lhuc:" + b.speaker_id);
        res.lhuc_updates.push_back(b.speaker_id);
      }
      for (int l = 0; l < kNumHiddenLayers; ++l) {
        HiddenLayer &layer = res.params.layers[l];
        layer.bn_mean = m * layer.bn_mean + (1.0 - m) * g.batch_mean[l];
        layer.bn_var = m * layer.bn_var + (1.0 - m) * g.batch_var[l];
      }
    }
    res.epoch_loss.push_back(total / static_cast<double>(batches.size()));
  }
  return res;
}

double EvaluateLoss(const std::vector<FrameBatch> &batches,
                    const NetworkConfig &config, const NetworkParams &params,
                    const LhucTable *lhuc, const MtlWeights &weights) {
  if (batches.empty()) throw InvalidArgument("EvaluateLoss: no batches");
  double sum = 0.0, frames = 0.0;
  for (const FrameBatch &b : batches) {
    const Vector *r = nullptr;
    if (lhuc) {
      auto it = lhuc->speakers.find(b.speaker_id);
      if (it != lhuc->speakers.end()) r = &it->second;
    }
    const double t = static_cast<double>(b.features.rows());
    sum += t * ComputeLoss(b, config, params, r, Mode::kEval, weights);
    frames += t;
  }
  return sum / frames;
}

void AdaptSpeaker(const std::vector<FrameBatch> &utterances,
                  const std::string &speaker, const NetworkConfig &config,
                  const NetworkParams &params, const AdaptOptions &options,
                  LhucTable *table) {
  config.Check();
  options.weights.Check();
  CheckSettings(options.optimizer);
  if (table == nullptr) throw InvalidArgument("AdaptSpeaker: null LHUC table");
  if (utterances.empty())
    throw InvalidArgument("AdaptSpeaker: no adaptation data for " + speaker);
  if (options.passes < 0) throw InvalidArgument("AdaptSpeaker: passes < 0");
  for (const FrameBatch &u : utterances)
    if (!u.speaker_id.empty() && u.speaker_id != speaker)
      throw InvalidArgument("AdaptSpeaker: utterance of speaker '" +
                            u.speaker_id + "' given for '" + speaker + "'");

  Vector &r = table->GetOrAdd(speaker, config.hidden_dims[0]);
  Optimizer opt(options.optimizer);
  for (int pass = 0; pass < options.passes; ++pass)
    for (const FrameBatch &u : utterances) {
      BatchGradients g = ComputeGradients(u, config, params, &r, Mode::kEval,
                                          options.weights);
      opt.Step({r.data(), static_cast<std::size_t>(r.size())},
               {g.lhuc.data(), static_cast<std::size_t>(g.lhuc.size())},
               "lhuc");
    }
}

std::vector<FrameBatch> MakeSyntheticCorpus(const NetworkConfig &config,
                                            const SyntheticCorpusOptions &o) {
  config.Check();
  if (o.num_speakers < 1 || o.batches_per_speaker < 1 ||
      o.frames_per_batch < 2 || o.base_dim < 1 || o.context < 0 ||
      o.noise < 0.0 || !(o.gain_spread >= 0.0 && o.gain_spread < 1.0))
    throw InvalidArgument("MakeSyntheticCorpus: bad options");
  if (o.base_dim * (2 * o.context + 1) != config.input_dim)
    throw InvalidArgument("MakeSyntheticCorpus: base_dim * (2 * context + 1) "
                          "must equal input_dim");

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const int states = config.n_triphone_targets;

  Matrix protos(states, o.base_dim);
  for (Eigen::Index i = 0; i < protos.size(); ++i) protos.data()[i] = normal(rng);
  std::vector<Vector> gains;
  for (int s = 0; s < o.num_speakers; ++s) {
    Vector g(o.base_dim);
    for (int d = 0; d < o.base_dim; ++d) g(d) = 1.0 + o.gain_spread * uniform(rng);
    gains.push_back(g);
  }

  std::vector<FrameBatch> out;
  for (int b = 0; b < o.batches_per_speaker; ++b)
    for (int s = 0; s < o.num_speakers; ++s) {
      FrameBatch batch;
      batch.speaker_id = "spk" + std::to_string(s);
      Matrix raw(o.frames_per_batch, o.base_dim);
      int state = static_cast<int>(rng() % static_cast<uint64_t>(states));
      int left = 0;
      for (int t = 0; t < o.frames_per_batch; ++t) {
        if (left == 0) {
          state = static_cast<int>(rng() % static_cast<uint64_t>(states));
          left = 3 + static_cast<int>(rng() % 6);
        }
        --left;
        for (int d = 0; d < o.base_dim; ++d)
          raw(t, d) = gains[s](d) * (protos(state, d) + o.noise * normal(rng));
        batch.triphone_labels.push_back(state);
        batch.monophone_labels.push_back(state % config.n_monophone_targets);
      }
      batch.features = SpliceContext(raw, o.context);
      out.push_back(std::move(batch));
    }
  return out;
}

}  // namespace nnet
}  // namespace dysaug
