// core/src/augment-plan.cc

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
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dysaug/augment.h"
#include "json.hpp"

namespace dysaug {

FactorSet FactorSet::Make(Multiplicity m) {
  switch (m) {
    case Multiplicity::k2x:
      return {m, {0.9, 1.1}};
    case Multiplicity::k4x:
      return {m, {0.9, 0.95, 1.05, 1.1}};
    case Multiplicity::k6x:
      return {m, {0.85, 0.9, 0.95, 1.05, 1.1, 1.15}};
  }
  throw InvalidArgument("bad factor-set multiplicity");
}

FactorSet FactorSet::Parse(const std::string &name) {
  if (name == "2x") return Make(Multiplicity::k2x);
  if (name == "4x") return Make(Multiplicity::k4x);
  if (name == "6x") return Make(Multiplicity::k6x);
  throw InvalidArgument("unknown factor set '" + name + "' (want 2x, 4x or 6x)");
}

std::string FactorSet::Name() const {
  switch (multiplicity) {
    case Multiplicity::k2x:
      return "2x";
    case Multiplicity::k4x:
      return "4x";
    case Multiplicity::k6x:
      return "6x";
  }
  return "?";
}

std::string MakeOutputId(const std::string &utterance_id, AugmentMethod method,
                         double factor,
                         const std::optional<std::string> &target_speaker) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", factor);
  std::string id = utterance_id + "__" + MethodName(method) + buf;
  if (target_speaker) id += "__to_" + *target_speaker;
  return id;
}

uint64_t StableHash(const std::string &s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<AugmentJob> BuildPlan(const std::vector<UtteranceRecord> &manifest,
                                  AugmentMethod method,
                                  const std::optional<FactorSet> &dys_set,
                                  const std::optional<FactorTable> &ctl_factors,
                                  int ctl_multiplicity) {
  if (ctl_multiplicity < 0)
    throw PlanError("ctl_multiplicity must be >= 0");
  if (ctl_multiplicity > 0 && !ctl_factors)
    throw PlanError("ctl_multiplicity > 0 requires a speaker factor table");

  std::vector<std::string> targets;
  if (ctl_factors) {
    for (const auto &[spk, f] : ctl_factors->entries) targets.push_back(spk);
    if (static_cast<std::size_t>(ctl_multiplicity) > targets.size())
      throw PlanError("ctl_multiplicity " + std::to_string(ctl_multiplicity) +
                      " exceeds the " + std::to_string(targets.size()) +
                      " target speakers in the factor table");
    for (const auto &r : manifest)
      if (r.group == SpeakerGroup::kDysarthric &&
          !ctl_factors->entries.count(r.speaker_id))
        throw PlanError("unknown speaker '" + r.speaker_id +
                        "' in manifest: no factor for this dysarthric speaker");
  }

  std::vector<AugmentJob> plan;
  for (const auto &r : manifest) {
    if (r.group == SpeakerGroup::kDysarthric && dys_set) {
      for (double f : dys_set->factors)
        plan.push_back({r, method, f, std::nullopt,
                        MakeOutputId(r.utterance_id, method, f, std::nullopt)});
    } else if (r.group == SpeakerGroup::kControl && ctl_multiplicity > 0) {
      const std::size_t t = targets.size();
      const std::size_t offset = StableHash(r.utterance_id) % t;
      for (int i = 0; i < ctl_multiplicity; ++i) {
        const std::string &target = targets[(offset + i) % t];
        double f = ctl_factors->entries.at(target);
        plan.push_back({r, method, f, target,
                        MakeOutputId(r.utterance_id, method, f, target)});
      }
    }
  }

  std::sort(plan.begin(), plan.end(),
            [](const AugmentJob &a, const AugmentJob &b) {
              return a.output_id < b.output_id;
            });
  for (std::size_t i = 1; i < plan.size(); ++i)
    if (plan[i].output_id == plan[i - 1].output_id)
      throw PlanError("duplicate output id '" + plan[i].output_id + "'");
  return plan;
}

void WritePlan(const std::vector<AugmentJob> &plan, std::ostream &os) {
  for (const auto &job : plan) {
    nlohmann::ordered_json j;
    j["output_id"] = job.output_id;
    j["method"] = MethodName(job.method);
    j["factor"] = job.factor;
    if (job.target_speaker) j["target_speaker"] = *job.target_speaker;
    j["source"] = nlohmann::ordered_json::parse(RecordToJson(job.source));
    os << j.dump() << '\n';
  }
}

void WritePlan(const std::vector<AugmentJob> &plan,
               const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw PlanError("cannot write plan " + path.string());
  WritePlan(plan, os);
  if (!os) throw PlanError("write failed for " + path.string());
}

std::vector<AugmentJob> ReadPlan(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw PlanError("cannot open plan " + path.string());
  std::vector<AugmentJob> plan;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      AugmentJob job;
      job.output_id = j.at("output_id").get<std::string>();
      job.method = ParseMethod(j.at("method").get<std::string>());
      job.factor = j.at("factor").get<double>();
      if (j.contains("target_speaker"))
        job.target_speaker = j["target_speaker"].get<std::string>();
      job.source = RecordFromJson(j.at("source").dump());
      plan.push_back(std::move(job));
    } catch (const std::exception &e) {
      throw PlanError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return plan;
}

PipelineConfig ParsePipelineConfig(std::istream &is,
                                   const std::filesystem::path &base_dir) {
  PipelineConfig cfg;
  bool have_manifest = false;
  auto resolve = [&](const std::string &v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) +
                            ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "manifest") {
        cfg.manifest = resolve(value);
        have_manifest = true;
      } else if (key == "method") {
        cfg.method = ParseMethod(value);
      } else if (key == "dys_set") {
        if (value == "none")
          cfg.dys_set.reset();
        else
          cfg.dys_set = FactorSet::Parse(value);
      } else if (key == "ctl_factors") {
        cfg.ctl_factors = resolve(value);
      } else if (key == "ctl_multiplicity") {
        cfg.ctl_multiplicity = std::stoi(value);
      } else if (key == "speaker_groups") {
        cfg.speaker_groups = resolve(value);
      } else if (key == "plan") {
        cfg.plan = resolve(value);
      } else if (key == "output_dir") {
        cfg.output_dir = resolve(value);
      } else if (key == "workers") {
        cfg.workers = std::stoi(value);
      } else if (key == "boundary_hz") {
        cfg.boundary_hz = std::stod(value);
      } else if (key == "frame_ms") {
        cfg.frame_ms = std::stod(value);
      } else if (key == "tolerance_ms") {
        cfg.tolerance_ms = std::stod(value);
      } else {
        throw InvalidArgument("unknown key '" + key + "'");
      }
    } catch (const std::exception &e) {
      throw InvalidArgument("config line " + std::to_string(line_no) + " (" +
                            key + "): " + e.what());
    }
  }
  if (!have_manifest) throw InvalidArgument("config: missing `manifest`");
  if (cfg.plan.is_relative()) cfg.plan = base_dir / cfg.plan;
  if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
  return cfg;
}

PipelineConfig ReadPipelineConfig(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open config " + path.string());
  return ParsePipelineConfig(is, path.parent_path());
}

}  // namespace dysaug
