// core/src/augment-run.cc

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
#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "dysaug/augment.h"
#include "dysaug/vtlp.h"
#include "dysaug/wav-io.h"

namespace dysaug {

AudioBuffer ApplyJob(const AugmentJob &job, const AudioBuffer &audio,
                     const RunOptions &options) {
  switch (job.method) {
    case AugmentMethod::kVtlp:
      return VtlpPerturb(audio, WarpSpec{job.factor, options.vtlp_boundary_hz},
                         options.vtlp_stft);
    case AugmentMethod::kTempo:
      return TempoPerturb(audio, TempoFactor{job.factor}, options.wsola);
    case AugmentMethod::kSpeed:
      return SpeedPerturb(audio, SpeedFactor{job.factor}, options.resampler);
  }
  throw InvalidArgument("bad augmentation method");
}

RunResult RunPlan(const std::vector<AugmentJob> &plan,
                  const RunOptions &options) {
  std::filesystem::create_directories(options.output_dir);

  struct Slot {
    std::optional<UtteranceRecord> record;
    std::string error;
  };
  std::vector<Slot> slots(plan.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      const AugmentJob &job = plan[i];
      try {
        std::filesystem::path src(job.source.audio_path);
        if (src.is_relative() && !options.audio_root.empty())
          src = options.audio_root / src;
        AudioBuffer out = ApplyJob(job, ReadWav(src), options);
        const std::string file = job.output_id + ".wav";
        WriteWav(out, options.output_dir / file);

        UtteranceRecord rec;
        rec.utterance_id = job.output_id;
        rec.speaker_id = job.target_speaker.value_or(job.source.speaker_id);
        rec.group = job.source.group;
        rec.audio_path = file;
        rec.duration = out.DurationSeconds();
        rec.method = job.method;
        rec.factor = job.factor;
        rec.source_id = job.source.utterance_id;
        rec.target_speaker = job.target_speaker.value_or("");
        slots[i].record = std::move(rec);
      } catch (const std::exception &e) {
        slots[i].error = e.what();
      }
    }
  };

  const int workers = std::max(1, options.workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  RunResult result;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (slots[i].record)
      result.manifest.push_back(std::move(*slots[i].record));
    else
      result.failures.push_back({plan[i].output_id, slots[i].error});
  }
  return result;
}

CorpusSummary Summarize(const std::vector<UtteranceRecord> &manifest) {
  CorpusSummary s;
  for (const auto &r : manifest) {
    const double hours = r.duration / 3600.0;
    s.total_hours += hours;
    s.hours_by_group[GroupName(r.group)] += hours;
    if (r.method) {
      s.augmented_hours += hours;
      s.hours_by_method[MethodName(*r.method)] += hours;
    } else {
      s.original_hours += hours;
      s.hours_by_method["original"] += hours;
    }
    ++s.num_utterances;
  }
  return s;
}

void PrintSummary(const CorpusSummary &s, std::ostream &os) {
  char buf[128];
  auto line = [&](const std::string &label, double hours) {
    std::snprintf(buf, sizeof(buf), "%-20s %10.4f h\n", label.c_str(), hours);
    os << buf;
  };
  os << "utterances           " << s.num_utterances << "\n";
  line("total", s.total_hours);
  line("original", s.original_hours);
  line("augmented", s.augmented_hours);
  for (const auto &[g, h] : s.hours_by_group) line("group " + g, h);
  for (const auto &[m, h] : s.hours_by_method) line("method " + m, h);
}

}  // namespace dysaug
