// dysaug/augment.h

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

#ifndef DYSAUG_AUGMENT_H_
#define DYSAUG_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dysaug/align-factors.h"
#include "dysaug/manifest.h"
#include "dysaug/speed.h"
#include "dysaug/stft.h"
#include "dysaug/wsola.h"

namespace dysaug {

class PlanError : public Error {
 public:
  using Error::Error;
};

/// Global perturbation factor sets applied to disordered speech.
struct FactorSet {
  enum class Multiplicity { k2x, k4x, k6x };

  Multiplicity multiplicity = Multiplicity::k2x;
  std::vector<double> factors;

  static FactorSet Make(Multiplicity m);
  static FactorSet Parse(const std::string &name);  // "2x", "4x", "6x"
  std::string Name() const;
};

struct AugmentJob {
  UtteranceRecord source;
  AugmentMethod method = AugmentMethod::kSpeed;
  double factor = 1.0;
  std::optional<std::string> target_speaker;  // set for CTL->DYS jobs
  std::string output_id;

  bool operator==(const AugmentJob &) const = default;
};

/// `<utt>__<method><factor:.2f>`, plus `__to_<target>` for CTL->DYS jobs.
std::string MakeOutputId(const std::string &utterance_id, AugmentMethod method,
                         double factor,
                         const std::optional<std::string> &target_speaker);

/// 64-bit FNV-1a; stable across platforms and runs.
uint64_t StableHash(const std::string &s);

/// Expands a manifest into augmentation jobs.
///
/// Each DYS utterance gets one job per factor of dys_set. With ctl_factors
/// and ctl_multiplicity = k > 0, each CTL utterance is assigned k distinct
/// target speakers taken round-robin from the table's speakers (sorted by
/// id) starting at StableHash(utterance_id) mod #targets, with one job per
/// target at that target's factor. Jobs are sorted by output_id.
///
/// Throws PlanError for a DYS speaker missing from ctl_factors, for k larger
/// than the number of targets, for k > 0 without a table, and for duplicate
/// output ids.
std::vector<AugmentJob> BuildPlan(const std::vector<UtteranceRecord> &manifest,
                                  AugmentMethod method,
                                  const std::optional<FactorSet> &dys_set,
                                  const std::optional<FactorTable> &ctl_factors,
                                  int ctl_multiplicity);

/// Plans are JSON lines: {"output_id", "method", "factor",
/// ["target_speaker",] "source": {manifest record}}.
void WritePlan(const std::vector<AugmentJob> &plan, std::ostream &os);
void WritePlan(const std::vector<AugmentJob> &plan,
               const std::filesystem::path &path);
std::vector<AugmentJob> ReadPlan(const std::filesystem::path &path);

struct RunOptions {
  std::filesystem::path output_dir;
  int workers = 1;
  /// Relative source audio paths are resolved against this directory.
  std::filesystem::path audio_root;

  double vtlp_boundary_hz = 4800.0;
  StftOptions vtlp_stft;
  WsolaParams wsola;
  ResamplerParams resampler;
};

struct JobFailure {
  std::string output_id;
  std::string message;
};

struct RunResult {
  /// Records of the jobs that succeeded, in plan order. audio_path is the
  /// output file name relative to output_dir.
  std::vector<UtteranceRecord> manifest;
  std::vector<JobFailure> failures;
};

/// Runs every job on a pool of `workers` threads and writes
/// <output_dir>/<output_id>.wav. Output files and the returned manifest do
/// not depend on the worker count. A failing job is recorded in
/// RunResult::failures and the batch continues.
RunResult RunPlan(const std::vector<AugmentJob> &plan,
                  const RunOptions &options);

/// Runs a single job and returns the perturbed audio (no file output).
AudioBuffer ApplyJob(const AugmentJob &job, const AudioBuffer &audio,
                     const RunOptions &options);

struct CorpusSummary {
  double total_hours = 0.0;
  double original_hours = 0.0;
  double augmented_hours = 0.0;
  std::map<std::string, double> hours_by_group;   // CTL / DYS
  std::map<std::string, double> hours_by_method;  // original / vtlp / ...
  std::size_t num_utterances = 0;
};

CorpusSummary Summarize(const std::vector<UtteranceRecord> &manifest);
void PrintSummary(const CorpusSummary &summary, std::ostream &os);

/// Pipeline configuration, read from `key = value` lines (`#` comments).
/// Relative paths are resolved against the config file's directory.
struct PipelineConfig {
  std::filesystem::path manifest;
  AugmentMethod method = AugmentMethod::kSpeed;
  std::optional<FactorSet> dys_set;
  std::optional<std::filesystem::path> ctl_factors;
  int ctl_multiplicity = 0;
  std::optional<std::filesystem::path> speaker_groups;
  std::filesystem::path plan = "plan.jsonl";
  std::filesystem::path output_dir = "augmented";
  int workers = 1;
  double boundary_hz = 4800.0;
  double frame_ms = 32.0;
  double tolerance_ms = 8.0;
};

PipelineConfig ReadPipelineConfig(const std::filesystem::path &path);
PipelineConfig ParsePipelineConfig(std::istream &is,
                                   const std::filesystem::path &base_dir);

}  // namespace dysaug

#endif  // DYSAUG_AUGMENT_H_
