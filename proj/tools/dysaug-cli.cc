// tools/dysaug-cli.cc

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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dysaug/align-factors.h"
#include "dysaug/augment.h"
#include "dysaug/manifest.h"
#include "dysaug/speed.h"
#include "dysaug/toy-nnet.h"
#include "dysaug/vtlp.h"
#include "dysaug/wav-io.h"
#include "dysaug/wsola.h"

namespace fs = std::filesystem;
using namespace dysaug;

namespace {

struct FileArgs {
  std::string in, out;
};

void AddFileArgs(CLI::App *cmd, FileArgs *args) {
  cmd->add_option("input", args->in, "input wav")->required();
  cmd->add_option("output", args->out, "output wav")->required();
}

RunOptions RunOptionsFromConfig(const PipelineConfig &cfg, int sample_rate) {
  RunOptions opts;
  opts.output_dir = cfg.output_dir;
  opts.workers = cfg.workers;
  opts.audio_root = cfg.manifest.parent_path();
  opts.vtlp_boundary_hz = cfg.boundary_hz;
  opts.wsola =
      WsolaParams::FromMilliseconds(sample_rate, cfg.frame_ms, cfg.tolerance_ms);
  return opts;
}

int CmdPlan(const std::string &config_path, const std::string &out_override) {
  PipelineConfig cfg = ReadPipelineConfig(config_path);
  auto manifest = ReadManifest(cfg.manifest);
  if (cfg.speaker_groups)
    CheckSpeakerGroups(manifest, ReadSpeakerGroups(*cfg.speaker_groups));
  std::optional<FactorTable> table;
  if (cfg.ctl_factors) table = ReadFactorTable(*cfg.ctl_factors);
  auto plan = BuildPlan(manifest, cfg.method, cfg.dys_set, table,
                        cfg.ctl_multiplicity);
  fs::path out = out_override.empty() ? cfg.plan : fs::path(out_override);
  WritePlan(plan, out);
  std::printf("wrote %zu jobs to %s\n", plan.size(), out.string().c_str());
  return 0;
}

int CmdRun(const std::string &config_path, int workers, int sample_rate) {
  PipelineConfig cfg = ReadPipelineConfig(config_path);
  if (workers > 0) cfg.workers = workers;
  auto plan = ReadPlan(cfg.plan);
  RunOptions opts = RunOptionsFromConfig(cfg, sample_rate);
  RunResult result = RunPlan(plan, opts);
  fs::path out_manifest = cfg.output_dir / "manifest.jsonl";
  WriteManifest(result.manifest, out_manifest);
  for (const JobFailure &f : result.failures)
    std::fprintf(stderr, "FAILED %s: %s\n", f.output_id.c_str(),
                 f.message.c_str());
  std::printf("%zu jobs succeeded, %zu failed; manifest %s\n",
              result.manifest.size(), result.failures.size(),
              out_manifest.string().c_str());
  return result.failures.empty() ? 0 : 1;
}

int CmdSummarize(const std::vector<std::string> &manifests) {
  std::vector<UtteranceRecord> all;
  for (const auto &m : manifests) {
    auto part = ReadManifest(m);
    all.insert(all.end(), part.begin(), part.end());
  }
  PrintSummary(Summarize(all), std::cout);
  return 0;
}

int CmdFactors(const std::vector<std::string> &ctms,
               const std::vector<std::string> &control,
               const std::string &groups_path, const std::string &regex,
               const std::string &out) {
  SpeakerExtractor extractor =
      regex.empty() ? SpeakerExtractor() : SpeakerExtractor(regex);
  std::vector<AlignmentSegment> segments;
  for (const auto &c : ctms) {
    auto part = ParseCtm(fs::path(c), extractor);
    segments.insert(segments.end(), part.begin(), part.end());
  }
  std::set<std::string> ctl(control.begin(), control.end());
  if (!groups_path.empty())
    for (const auto &[spk, g] : ReadSpeakerGroups(groups_path))
      if (g == SpeakerGroup::kControl) ctl.insert(spk);
  if (ctl.empty())
    throw InvalidArgument("no control speakers given (--control or --groups)");

  std::vector<SpeakerDurationStats> ctl_stats, dys_stats;
  for (auto &s : ComputeSpeakerStats(segments))
    (ctl.count(s.speaker_id) ? ctl_stats : dys_stats).push_back(s);
  FactorTable table = BuildFactorTable(ctl_stats, dys_stats);
  if (out.empty())
    WriteFactorTable(table, std::cout);
  else
    WriteFactorTable(table, fs::path(out));
  return 0;
}

int CmdToy(uint64_t seed, int epochs, double lr, const std::string &out) {
  nnet::NetworkConfig config;
  nnet::SyntheticCorpusOptions data;
  data.seed = seed;
  auto batches = nnet::MakeSyntheticCorpus(config, data);
  nnet::TrainOptions opts;
  opts.seed = seed;
  opts.epochs = epochs;
  opts.optimizer.learning_rate = lr;
  auto res = nnet::TrainSat(batches, config, opts);
  for (std::size_t e = 0; e < res.epoch_loss.size(); ++e)
    std::printf("epoch %zu loss %.6f\n", e + 1, res.epoch_loss[e]);
  std::printf("checksum %016llx\n",
              static_cast<unsigned long long>(nnet::ParamsChecksum(res.params)));
  if (!out.empty()) nnet::SaveModel({config, res.params, res.lhuc}, out);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speech data augmentation for dysarthric ASR"};
  app.require_subcommand(1);

  FileArgs vtlp_args, tempo_args, speed_args;
  double alpha = 1.0, boundary_hz = 4800.0;
  auto *vtlp = app.add_subcommand("vtlp", "vocal tract length perturbation");
  AddFileArgs(vtlp, &vtlp_args);
  vtlp->add_option("--alpha", alpha, "warp factor")->required();
  vtlp->add_option("--boundary-hz", boundary_hz, "warp boundary frequency");

  double tempo_factor = 1.0, frame_ms = 32.0, tolerance_ms = 8.0;
  auto *tempo = app.add_subcommand("tempo", "WSOLA tempo perturbation");
  AddFileArgs(tempo, &tempo_args);
  tempo->add_option("--factor", tempo_factor, ">1 is faster")->required();
  tempo->add_option("--frame-ms", frame_ms, "frame length");
  tempo->add_option("--tolerance-ms", tolerance_ms, "max alignment shift");

  double speed_factor = 1.0;
  auto *speed = app.add_subcommand("speed", "resampling speed perturbation");
  AddFileArgs(speed, &speed_args);
  speed->add_option("--factor", speed_factor, ">1 is faster")->required();

  std::string config_path, plan_out;
  auto *plan = app.add_subcommand("plan", "build a job plan from a config");
  plan->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  plan->add_option("--out", plan_out, "override the plan path");

  int workers = 0, sample_rate = 16000;
  auto *run = app.add_subcommand("run", "execute a job plan");
  run->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "override worker count");
  run->add_option("--sample-rate", sample_rate,
                  "rate used to convert WSOLA milliseconds to samples");

  std::vector<std::string> manifests;
  auto *summarize = app.add_subcommand("summarize", "corpus hours report");
  summarize->add_option("manifests", manifests)->required()->check(
      CLI::ExistingFile);

  std::vector<std::string> ctms, control;
  std::string groups_path, speaker_regex, factors_out;
  auto *factors =
      app.add_subcommand("factors", "per-speaker tempo factors from CTM files");
  factors->add_option("ctm", ctms)->required()->check(CLI::ExistingFile);
  factors->add_option("--control", control, "control speaker ids");
  factors->add_option("--groups", groups_path, "speaker group map");
  factors->add_option("--speaker-regex", speaker_regex,
                      "regex with one capture group for the speaker id");
  factors->add_option("--out", factors_out, "output table (default stdout)");

  uint64_t seed = 1;
  int epochs = 10;
  double lr = 0.05;
  std::string model_out;
  auto *toy = app.add_subcommand("toy", "train the toy model on synthetic data");
  toy->add_option("--seed", seed);
  toy->add_option("--epochs", epochs);
  toy->add_option("--learning-rate", lr);
  toy->add_option("--out", model_out, "model file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*vtlp) {
      AudioBuffer in = ReadWav(vtlp_args.in);
      WriteWav(VtlpPerturb(in, {alpha, boundary_hz}), vtlp_args.out);
    } else if (*tempo) {
      AudioBuffer in = ReadWav(tempo_args.in);
      auto params =
          WsolaParams::FromMilliseconds(in.SampleRate(), frame_ms, tolerance_ms);
      WriteWav(TempoPerturb(in, {tempo_factor}, params), tempo_args.out);
    } else if (*speed) {
      WriteWav(SpeedPerturb(ReadWav(speed_args.in), {speed_factor}),
               speed_args.out);
    } else if (*plan) {
      return CmdPlan(config_path, plan_out);
    } else if (*run) {
      return CmdRun(config_path, workers, sample_rate);
    } else if (*summarize) {
      return CmdSummarize(manifests);
    } else if (*factors) {
      return CmdFactors(ctms, control, groups_path, speaker_regex, factors_out);
    } else if (*toy) {
      return CmdToy(seed, epochs, lr, model_out);
    }
  } catch (const std::exception &e) {
    std::fprintf(stderr, "dysaug: %s\n", e.what());
    return 2;
  }
  return 0;
}
