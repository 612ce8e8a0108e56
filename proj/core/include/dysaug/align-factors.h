// dysaug/align-factors.h

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

#ifndef DYSAUG_ALIGN_FACTORS_H_
#define DYSAUG_ALIGN_FACTORS_H_

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "dysaug/error.h"

namespace dysaug {

/// One aligned phone token from a CTM file.
struct AlignmentSegment {
  std::string utterance_id;
  std::string speaker_id;
  std::string channel;
  double start = 0.0;     // seconds
  double duration = 0.0;  // seconds
  std::string phone;
};

struct SpeakerDurationStats {
  std::string speaker_id;
  double mean_phone_duration = 0.0;  // seconds
  std::size_t phone_count = 0;
};

/// Per-speaker perturbation factors F = reference_duration / l_speaker.
struct FactorTable {
  double reference_duration = 0.0;  // mean of the control speakers' means
  std::map<std::string, double> entries;
};

class CtmParseError : public Error {
 public:
  CtmParseError(const std::string &source, std::size_t line,
                const std::string &why);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Maps an utterance id to its speaker. By default the speaker is the prefix
/// up to the first underscore (F02_B1_CW1_M2 -> F02); with a pattern, the
/// first capture group of a regex search is used.
class SpeakerExtractor {
 public:
  SpeakerExtractor() = default;
  explicit SpeakerExtractor(const std::string &pattern);

  std::string operator()(const std::string &utterance_id) const;

 private:
  std::optional<std::regex> pattern_;
};

/// Lines are `utterance_id channel start_sec dur_sec phone`; blank lines and
/// lines starting with ';;' or '#' are skipped.
std::vector<AlignmentSegment> ParseCtm(std::istream &is,
                                       const std::string &source_name,
                                       const SpeakerExtractor &speaker = {});
std::vector<AlignmentSegment> ParseCtm(const std::filesystem::path &path,
                                       const SpeakerExtractor &speaker = {});

const std::set<std::string> &DefaultSilenceLabels();

/// Mean phone duration per speaker over non-silence tokens, sorted by
/// speaker id. Speakers with only silence are omitted.
std::vector<SpeakerDurationStats> ComputeSpeakerStats(
    const std::vector<AlignmentSegment> &segments,
    const std::set<std::string> &silence_labels = DefaultSilenceLabels());

/// Reference is the unweighted mean of the control speakers' means; each
/// dysarthric speaker gets reference / its own mean. Throws InvalidArgument
/// on an empty control or dysarthric set.
FactorTable BuildFactorTable(
    const std::vector<SpeakerDurationStats> &control_stats,
    const std::vector<SpeakerDurationStats> &dysarthric_stats);

/// `speaker_id<TAB>factor` lines with 6 decimals, preceded by a
/// `# reference_duration` comment.
void WriteFactorTable(const FactorTable &table,
                      const std::filesystem::path &path);
void WriteFactorTable(const FactorTable &table, std::ostream &os);
FactorTable ReadFactorTable(const std::filesystem::path &path);

}  // namespace dysaug

#endif  // DYSAUG_ALIGN_FACTORS_H_
