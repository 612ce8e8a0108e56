// core/src/manifest.cc

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

#include "dysaug/manifest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dysaug {

using nlohmann::json;

const char *GroupName(SpeakerGroup g) {
  return g == SpeakerGroup::kControl ? "CTL" : "DYS";
}

SpeakerGroup ParseGroup(const std::string &name) {
  if (name == "CTL") return SpeakerGroup::kControl;
  if (name == "DYS") return SpeakerGroup::kDysarthric;
  throw ManifestError("unknown speaker group '" + name + "' (want CTL or DYS)");
}

const char *MethodName(AugmentMethod m) {
  switch (m) {
    case AugmentMethod::kVtlp:
      return "vtlp";
    case AugmentMethod::kTempo:
      return "tempo";
    case AugmentMethod::kSpeed:
      return "speed";
  }
  return "?";
}

AugmentMethod ParseMethod(const std::string &name) {
  if (name == "vtlp") return AugmentMethod::kVtlp;
  if (name == "tempo") return AugmentMethod::kTempo;
  if (name == "speed") return AugmentMethod::kSpeed;
  throw InvalidArgument("unknown augmentation method '" + name + "'");
}

std::string RecordToJson(const UtteranceRecord &r) {
  // ordered_json keeps the field order stable in the output.
  nlohmann::ordered_json j;
  j["utterance_id"] = r.utterance_id;
  j["speaker_id"] = r.speaker_id;
  j["group"] = GroupName(r.group);
  j["audio_path"] = r.audio_path;
  j["duration"] = r.duration;
  if (r.method) j["method"] = MethodName(*r.method);
  if (r.factor) j["factor"] = *r.factor;
  if (!r.source_id.empty()) j["source_id"] = r.source_id;
  if (!r.target_speaker.empty()) j["target_speaker"] = r.target_speaker;
  return j.dump();
}

UtteranceRecord RecordFromJson(const std::string &line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception &e) {
    throw ManifestError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("record is not a JSON object");
  UtteranceRecord r;
  try {
    r.utterance_id = j.at("utterance_id").get<std::string>();
    r.speaker_id = j.at("speaker_id").get<std::string>();
    r.group = ParseGroup(j.at("group").get<std::string>());
    r.audio_path = j.at("audio_path").get<std::string>();
    r.duration = j.at("duration").get<double>();
    if (j.contains("method"))
      r.method = ParseMethod(j["method"].get<std::string>());
    if (j.contains("factor")) r.factor = j["factor"].get<double>();
    if (j.contains("source_id")) r.source_id = j["source_id"].get<std::string>();
    if (j.contains("target_speaker"))
      r.target_speaker = j["target_speaker"].get<std::string>();
  } catch (const json::exception &e) {
    throw ManifestError(std::string("bad record field: ") + e.what());
  } catch (const InvalidArgument &e) {
    throw ManifestError(e.what());
  }
  if (r.utterance_id.empty()) throw ManifestError("empty utterance_id");
  if (!(r.duration > 0.0))
    throw ManifestError("utterance " + r.utterance_id +
                        " has non-positive duration");
  return r;
}

std::vector<UtteranceRecord> ReadManifest(std::istream &is,
                                          const std::string &source_name) {
  std::vector<UtteranceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(RecordFromJson(line));
    } catch (const ManifestError &e) {
      throw ManifestError(source_name + ":" + std::to_string(line_no) + ": " +
                          e.what());
    }
  }
  return records;
}

std::vector<UtteranceRecord> ReadManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw ManifestError("cannot open manifest " + path.string());
  return ReadManifest(is, path.string());
}

void WriteManifest(const std::vector<UtteranceRecord> &records,
                   std::ostream &os) {
  for (const auto &r : records) os << RecordToJson(r) << '\n';
}

void WriteManifest(const std::vector<UtteranceRecord> &records,
                   const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ManifestError("cannot write manifest " + path.string());
  WriteManifest(records, os);
  if (!os) throw ManifestError("write failed for " + path.string());
}

SpeakerGroupMap ReadSpeakerGroups(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw ManifestError("cannot open speaker map " + path.string());
  SpeakerGroupMap groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string spk, grp;
    if (!(fields >> spk) || spk[0] == '#') continue;
    if (!(fields >> grp))
      throw ManifestError(path.string() + ":" + std::to_string(line_no) +
                          ": expected `speaker group`");
    groups[spk] = ParseGroup(grp);
  }
  return groups;
}

void CheckSpeakerGroups(const std::vector<UtteranceRecord> &records,
                        const SpeakerGroupMap &groups) {
  for (const auto &r : records) {
    auto it = groups.find(r.speaker_id);
    if (it == groups.end())
      throw ManifestError("unknown speaker '" + r.speaker_id +
                          "' in manifest (utterance " + r.utterance_id + ")");
    if (it->second != r.group)
      throw ManifestError("utterance " + r.utterance_id + " is labelled " +
                          GroupName(r.group) + " but speaker " + r.speaker_id +
                          " is " + GroupName(it->second));
  }
}

}  // namespace dysaug
