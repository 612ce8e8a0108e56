// dysaug/toy-nnet.h

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

#ifndef DYSAUG_TOY_NNET_H_
#define DYSAUG_TOY_NNET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dysaug/error.h"

namespace dysaug {
namespace nnet {

using Matrix = Eigen::MatrixXd;  // rows are frames
using Vector = Eigen::VectorXd;

constexpr int kNumHiddenLayers = 7;

enum class Mode { kTrain, kEval };

/// Where the layer-1 LHUC scaling sits relative to batch normalization.
enum class LhucPlacement { kAfterBatchNorm, kBeforeBatchNorm };

/// Seven hidden layers of affine -> ReLU -> batch norm. Layers 2..6 start
/// with a linear bottleneck, layers 1..6 end with dropout in training, and a
/// skip pair (from, to) adds the output of layer `from` to the input of
/// layer `to`. Two softmax heads (triphone states, monophones) read layer 7.
struct NetworkConfig {
  int input_dim = 36;
  std::vector<int> hidden_dims = {64, 64, 64, 64, 64, 64, 32};
  int bottleneck_dim = 16;
  double dropout_rate = 0.2;
  int n_triphone_targets = 20;
  int n_monophone_targets = 10;
  std::vector<std::pair<int, int>> skip_connections = {{1, 3}, {4, 6}};
  LhucPlacement lhuc_placement = LhucPlacement::kAfterBatchNorm;
  double batchnorm_epsilon = 1e-5;
  double batchnorm_momentum = 0.9;

  /// Throws InvalidArgument on a malformed configuration.
  void Check() const;
  bool HasBottleneck(int layer) const { return layer >= 2 && layer <= 6; }
  bool HasDropout(int layer) const { return layer >= 1 && layer <= 6; }

  /// 2000-unit layers, 200-dim bottlenecks, 100-unit seventh layer, 80-dim
  /// features over a 9-frame window.
  static NetworkConfig FullScale(int n_triphone_targets,
                                  int n_monophone_targets);
};

struct HiddenLayer {
  Matrix bottleneck;  // bottleneck_dim x input (empty without bottleneck)
  Matrix weight;      // units x (bottleneck_dim or input)
  Vector bias;
  Vector bn_mean;  // running statistics, not trained
  Vector bn_var;
};

struct NetworkParams {
  std::vector<HiddenLayer> layers;  // kNumHiddenLayers entries
  Matrix triphone_weight;
  Vector triphone_bias;
  Matrix monophone_weight;
  Vector monophone_bias;

  /// Trainable tensors in declaration order (bottleneck, weight, bias per
  /// layer, then the two heads).
  std::vector<std::span<double>> Trainable();
  /// Every tensor including the batch-norm statistics, in declaration order.
  std::vector<std::span<double>> All();
  std::vector<std::span<const double>> All() const;

  /// Zeroed tensors with the same shapes.
  NetworkParams ZerosLike() const;
};

NetworkParams InitParams(const NetworkConfig &config, uint64_t seed);

/// Per-speaker LHUC parameters r (one per layer-1 unit); the applied
/// amplitude is 2 * sigmoid(r), so r = 0 is the identity.
struct LhucTable {
  std::map<std::string, Vector> speakers;

  /// Entry for `speaker`, created as zeros of size `dim` if missing.
  Vector &GetOrAdd(const std::string &speaker, int dim);
};

Vector LhucAmplitude(const Vector &r);

struct MtlWeights {
  double lambda = 0.5;
  void Check() const;  // 0 <= lambda <= 1
};

struct FrameBatch {
  Matrix features;  // frames x input_dim (already spliced)
  std::vector<int> triphone_labels;
  std::vector<int> monophone_labels;
  std::string speaker_id;
};

struct Posteriors {
  Matrix triphone;
  Matrix monophone;
};

/// Row t is frames t-context .. t+context concatenated, replicating the first
/// and last frame at the edges.
Matrix SpliceContext(const Matrix &frames, int context);

/// Forward pass. When `lhuc` is given it must hold batch.speaker_id. In
/// training mode batch norm uses batch statistics and dropout draws from
/// `rng` (required when dropout_rate > 0).
Posteriors Forward(const FrameBatch &batch, const NetworkConfig &config,
                   const NetworkParams &params, const LhucTable *lhuc,
                   Mode mode, std::mt19937_64 *rng = nullptr);

/// Mean negative log posterior of the labels.
double CrossEntropy(const Matrix &posteriors, const std::vector<int> &labels);

/// lambda * CE(triphone) + (1 - lambda) * CE(monophone).
double MtlLoss(const Posteriors &post, const std::vector<int> &triphone_labels,
               const std::vector<int> &monophone_labels,
               const MtlWeights &weights);

struct BatchGradients {
  double loss = 0.0;
  NetworkParams params;    // d loss / d trainable tensors
  Vector lhuc;             // d loss / d r (empty without LHUC)
  std::vector<Vector> batch_mean;  // batch-norm statistics seen (train mode)
  std::vector<Vector> batch_var;
};

/// Loss and exact gradients by backpropagation. `lhuc_r` is the speaker's
/// LHUC vector, or nullptr to run without LHUC.
BatchGradients ComputeGradients(const FrameBatch &batch,
                                const NetworkConfig &config,
                                const NetworkParams &params,
                                const Vector *lhuc_r, Mode mode,
                                const MtlWeights &weights,
                                std::mt19937_64 *rng = nullptr);

/// Loss only, with the same arithmetic as ComputeGradients.
double ComputeLoss(const FrameBatch &batch, const NetworkConfig &config,
                   const NetworkParams &params, const Vector *lhuc_r,
                   Mode mode, const MtlWeights &weights,
                   std::mt19937_64 *rng = nullptr);

struct OptimizerSettings {
  enum class Kind { kSgd, kRmsProp };
  Kind kind = Kind::kSgd;
  double learning_rate = 0.05;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
};

/// Applies updates tensor by tensor; keeps RMSProp accumulators per tensor.
class Optimizer {
 public:
  explicit Optimizer(OptimizerSettings settings) : settings_(settings) {}
  void Step(std::span<double> param, std::span<const double> grad,
            const std::string &slot);

 private:
  OptimizerSettings settings_;
  std::map<std::string, Vector> mean_square_;
};

struct TrainOptions {
  OptimizerSettings optimizer;
  MtlWeights weights;
  int epochs = 10;
  uint64_t seed = 1;
  bool use_lhuc = true;     // false: speaker-independent training
  bool freeze_lhuc = false;  // keep every r at its initial value
};

struct TrainResult {
  NetworkParams params;
  LhucTable lhuc;
  std::vector<double> epoch_loss;         // mean training-mode batch loss
  std::vector<std::string> lhuc_updates;  // speaker of each LHUC update
};

/// Speaker adaptive training: every batch updates the shared parameters and
/// the LHUC vector of that batch's speaker, once per batch.
TrainResult TrainSat(const std::vector<FrameBatch> &batches,
                     const NetworkConfig &config, const TrainOptions &options,
                     std::optional<NetworkParams> init = std::nullopt);

/// Mean eval-mode loss over the batches, using each batch speaker's LHUC
/// vector when `lhuc` is given (identity for unknown speakers).
double EvaluateLoss(const std::vector<FrameBatch> &batches,
                    const NetworkConfig &config, const NetworkParams &params,
                    const LhucTable *lhuc, const MtlWeights &weights);

struct AdaptOptions {
  OptimizerSettings optimizer;
  MtlWeights weights;
  int passes = 1;  // passes over the utterance list; 0 only registers r = 0
};

/// Test-time adaptation of one speaker: network parameters are frozen and
/// batch norm uses its stored statistics; the speaker's LHUC vector takes
/// one gradient step per utterance. Only table->speakers[speaker] changes.
/// Throws InvalidArgument on an empty utterance list.
void AdaptSpeaker(const std::vector<FrameBatch> &utterances,
                  const std::string &speaker, const NetworkConfig &config,
                  const NetworkParams &params, const AdaptOptions &options,
                  LhucTable *table);

struct GradientCheckOptions {
  uint64_t seed = 7;
  MtlWeights weights;
  int num_params = 300;  // sampled trainable entries, all LHUC entries extra
  double step = 1e-5;
  int num_frames = 12;
  Mode batchnorm_mode = Mode::kEval;
  bool lhuc_at_zero = false;  // r = 0 instead of random r
};

/// Errors are |a - n| / max(|a|, |n|, 1e-6) for analytic a and central
/// difference n. Probes whose two evaluations land on different sides of a
/// ReLU kink are redrawn, since the difference quotient is meaningless there.
struct GradientCheckResult {
  double max_relative_error = 0.0;
  double max_lhuc_relative_error = 0.0;
  int num_checked = 0;
  int num_lhuc_checked = 0;
  /// Analytic gradient of the monophone head (weights then bias).
  std::vector<double> monophone_head_gradient;
};

/// Compares backpropagated gradients against central finite differences on
/// a random network, batch and LHUC vector. Dropout is disabled.
GradientCheckResult GradientCheck(const NetworkConfig &config,
                                  const GradientCheckOptions &options);

struct SyntheticCorpusOptions {
  int num_speakers = 2;
  int batches_per_speaker = 10;
  int frames_per_batch = 64;
  int base_dim = 4;  // features per frame before splicing
  int context = 4;   // input_dim = base_dim * (2 * context + 1)
  double noise = 0.3;
  double gain_spread = 0.6;  // per-dimension speaker gains in 1 +- spread
  uint64_t seed = 1;
};

/// Frames drawn around per-class prototypes, transformed by per-speaker,
/// per-dimension gains, then spliced. Triphone state s belongs to monophone
/// s % n_monophone_targets. Batches are ordered speaker by speaker, with
/// speakers named spk0, spk1, ...
std::vector<FrameBatch> MakeSyntheticCorpus(const NetworkConfig &config,
                                            const SyntheticCorpusOptions &opts);

/// Order-sensitive FNV-1a checksum over the bytes of every tensor.
uint64_t ParamsChecksum(const NetworkParams &params);

struct ModelFile {
  NetworkConfig config;
  NetworkParams params;
  LhucTable lhuc;
};

/// Binary layout: "DYSAUGNN", u32 version, the configuration, every tensor of
/// NetworkParams::All() as little-endian float64, then the LHUC table.
void SaveModel(const ModelFile &model, const std::filesystem::path &path);
ModelFile LoadModel(const std::filesystem::path &path);

}  // namespace nnet
}  // namespace dysaug

#endif  // DYSAUG_TOY_NNET_H_
