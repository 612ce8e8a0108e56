// core/src/align-factors.cc

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

#include "dysaug/align-factors.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dysaug {

namespace {

bool ParseDouble(const std::string &text, double *out) {
  std::size_t used = 0;
  try {
    *out = std::stod(text, &used);
  } catch (const std::exception &) {
    return false;
  }
  return used == text.size() && std::isfinite(*out);
}

}  // namespace

CtmParseError::CtmParseError(const std::string &source, std::size_t line,
                             const std::string &why)
    : Error(source + ":" + std::to_string(line) + ": " + why), line_(line) {}

SpeakerExtractor::SpeakerExtractor(const std::string &pattern) {
  try {
    pattern_.emplace(pattern);
  } catch (const std::regex_error &e) {
    throw InvalidArgument("bad speaker pattern '" + pattern + "': " + e.what());
  }
  if (pattern_->mark_count() < 1)
    throw InvalidArgument("speaker pattern '" + pattern +
                          "' needs a capture group");
}

std::string SpeakerExtractor::operator()(const std::string &utterance_id) const {
  if (!pattern_) return utterance_id.substr(0, utterance_id.find('_'));
  std::smatch m;
  if (!std::regex_search(utterance_id, m, *pattern_) || !m[1].matched)
    throw InvalidArgument("speaker pattern does not match utterance '" +
                          utterance_id + "'");
  return m[1].str();
}

std::vector<AlignmentSegment> ParseCtm(std::istream &is,
                                       const std::string &source_name,
                                       const SpeakerExtractor &speaker) {
  std::vector<AlignmentSegment> segments;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok[0].rfind(";;", 0) == 0 || tok[0][0] == '#') continue;
    if (tok.size() < 5)
      throw CtmParseError(source_name, line_no,
                          "expected 5 fields (utt channel start dur phone), got " +
                              std::to_string(tok.size()));
    AlignmentSegment seg;
    seg.utterance_id = tok[0];
    seg.channel = tok[1];
    if (!ParseDouble(tok[2], &seg.start))
      throw CtmParseError(source_name, line_no, "bad start time '" + tok[2] + "'");
    if (!ParseDouble(tok[3], &seg.duration))
      throw CtmParseError(source_name, line_no, "bad duration '" + tok[3] + "'");
    if (seg.duration < 0.0)
      throw CtmParseError(source_name, line_no, "negative duration");
    if (seg.start < 0.0)
      throw CtmParseError(source_name, line_no, "negative start time");
    seg.phone = tok[4];
    seg.speaker_id = speaker(seg.utterance_id);
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<AlignmentSegment> ParseCtm(const std::filesystem::path &path,
                                       const SpeakerExtractor &speaker) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open CTM file " + path.string());
  return ParseCtm(is, path.string(), speaker);
}

const std::set<std::string> &DefaultSilenceLabels() {
  static const std::set<std::string> labels = {"sil", "sp", "spn", "nsn"};
  return labels;
}

std::vector<SpeakerDurationStats> ComputeSpeakerStats(
    const std::vector<AlignmentSegment> &segments,
    const std::set<std::string> &silence_labels) {
  // Durations are summed in sorted order so the means do not depend on the
  // order of the segments.
  std::map<std::string, std::vector<double>> durations;
  for (const auto &seg : segments) {
    if (silence_labels.count(seg.phone)) continue;
    if (seg.duration <= 0.0) continue;
    durations[seg.speaker_id].push_back(seg.duration);
  }
  std::vector<SpeakerDurationStats> stats;
  stats.reserve(durations.size());
  for (auto &[spk, d] : durations) {
    std::sort(d.begin(), d.end());
    double sum = 0.0;
    for (double v : d) sum += v;
    stats.push_back({spk, sum / static_cast<double>(d.size()), d.size()});
  }
  return stats;
}

FactorTable BuildFactorTable(
    const std::vector<SpeakerDurationStats> &control_stats,
    const std::vector<SpeakerDurationStats> &dysarthric_stats) {
  if (control_stats.empty())
    throw InvalidArgument("BuildFactorTable: no control speakers");
  if (dysarthric_stats.empty())
    throw InvalidArgument("BuildFactorTable: no dysarthric speakers");
  // Sum in speaker-id order so the result does not depend on input order.
  std::map<std::string, double> control;
  for (const auto &s : control_stats) control[s.speaker_id] = s.mean_phone_duration;
  double sum = 0.0;
  for (const auto &[spk, mean] : control) sum += mean;

  FactorTable table;
  table.reference_duration = sum / static_cast<double>(control.size());
  for (const auto &s : dysarthric_stats) {
    if (!(s.mean_phone_duration > 0.0))
      throw InvalidArgument("BuildFactorTable: speaker " + s.speaker_id +
                            " has non-positive mean duration");
    table.entries[s.speaker_id] = table.reference_duration / s.mean_phone_duration;
  }
  return table;
}

void WriteFactorTable(const FactorTable &table, std::ostream &os) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", table.reference_duration);
  os << "# reference_duration " << buf << "\n";
  for (const auto &[spk, f] : table.entries) {
    std::snprintf(buf, sizeof(buf), "%.6f", f);
    os << spk << '\t' << buf << '\n';
  }
}

void WriteFactorTable(const FactorTable &table,
                      const std::filesystem::path &path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write factor table " + path.string());
  WriteFactorTable(table, os);
  if (!os) throw Error("write failed for " + path.string());
}

FactorTable ReadFactorTable(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open factor table " + path.string());
  FactorTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a)) continue;
    if (a[0] == '#') {
      if (fields >> b; a == "#" && b == "reference_duration") {
        std::string v;
        fields >> v;
        ParseDouble(v, &table.reference_duration);
      }
      continue;
    }
    double f;
    if (!(fields >> b) || !ParseDouble(b, &f) || !(f > 0.0))
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected `speaker<TAB>positive factor`");
    table.entries[a] = f;
  }
  return table;
}

}  // namespace dysaug
