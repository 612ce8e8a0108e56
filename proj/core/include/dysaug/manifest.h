// dysaug/manifest.h

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

#ifndef DYSAUG_MANIFEST_H_
#define DYSAUG_MANIFEST_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dysaug/error.h"

namespace dysaug {

enum class SpeakerGroup { kControl, kDysarthric };
enum class AugmentMethod { kVtlp, kTempo, kSpeed };

const char *GroupName(SpeakerGroup g);  // "CTL" / "DYS"
SpeakerGroup ParseGroup(const std::string &name);
const char *MethodName(AugmentMethod m);  // "vtlp" / "tempo" / "speed"
AugmentMethod ParseMethod(const std::string &name);

class ManifestError : public Error {
 public:
  using Error::Error;
};

/// One utterance of a corpus manifest. Augmented outputs additionally carry
/// the method, factor, source utterance and (for CTL->DYS jobs) the target
/// speaker they were generated for.
struct UtteranceRecord {
  std::string utterance_id;
  std::string speaker_id;
  SpeakerGroup group = SpeakerGroup::kDysarthric;
  std::string audio_path;
  double duration = 0.0;  // seconds

  std::optional<AugmentMethod> method;
  std::optional<double> factor;
  std::string source_id;
  std::string target_speaker;

  bool operator==(const UtteranceRecord &) const = default;
};

/// Manifests are JSON lines, one object per record.
std::vector<UtteranceRecord> ReadManifest(std::istream &is,
                                          const std::string &source_name);
std::vector<UtteranceRecord> ReadManifest(const std::filesystem::path &path);
void WriteManifest(const std::vector<UtteranceRecord> &records,
                   std::ostream &os);
void WriteManifest(const std::vector<UtteranceRecord> &records,
                   const std::filesystem::path &path);

std::string RecordToJson(const UtteranceRecord &r);
UtteranceRecord RecordFromJson(const std::string &line);

using SpeakerGroupMap = std::map<std::string, SpeakerGroup>;

/// `speaker<whitespace>CTL|DYS` per line.
SpeakerGroupMap ReadSpeakerGroups(const std::filesystem::path &path);

/// Throws ManifestError naming the first record whose speaker is missing from
/// the map or whose group disagrees with it.
void CheckSpeakerGroups(const std::vector<UtteranceRecord> &records,
                        const SpeakerGroupMap &groups);

}  // namespace dysaug

#endif  // DYSAUG_MANIFEST_H_
