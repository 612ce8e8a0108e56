// core/src/wav-io.cc

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

#include "dysaug/wav-io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace dysaug {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV reader assumes a little-endian host");

uint16_t ReadU16(const char *p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

uint32_t ReadU32(const char *p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

void PutU16(std::vector<char> *out, uint16_t v) {
  char b[2];
  std::memcpy(b, &v, 2);
  out->insert(out->end(), b, b + 2);
}

void PutU32(std::vector<char> *out, uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out->insert(out->end(), b, b + 4);
}

void PutTag(std::vector<char> *out, const char *tag) {
  out->insert(out->end(), tag, tag + 4);
}

struct FormatChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
};

}  // namespace

AudioBuffer ReadWav(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw WavError(WavError::Kind::kMissingFile,
                   "cannot open WAV file " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());

  auto malformed = [&](const std::string &why) {
    return WavError(WavError::Kind::kMalformed,
                    "malformed WAV file " + path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw malformed("missing RIFF/WAVE header");

  FormatChunk fmt;
  bool have_fmt = false;
  const char *data = nullptr;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char *chunk = bytes.data() + pos;
    uint32_t size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw malformed("truncated fmt chunk");
      const char *f = bytes.data() + body;
      fmt.format = ReadU16(f);
      fmt.channels = ReadU16(f + 2);
      fmt.sample_rate = ReadU32(f + 4);
      fmt.bits_per_sample = ReadU16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 40) throw malformed("truncated extensible fmt chunk");
        // First two bytes of the sub-format GUID carry the codec tag.
        fmt.format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Streams written without a final size use 0xFFFFFFFF; take what exists.
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, avail);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt) throw malformed("no fmt chunk");
  if (!have_data) throw malformed("no data chunk");
  if (fmt.channels == 0 || fmt.sample_rate == 0)
    throw malformed("zero channels or sample rate");

  bool is_int16 = fmt.format == kFormatPcm && fmt.bits_per_sample == 16;
  bool is_float32 = fmt.format == kFormatFloat && fmt.bits_per_sample == 32;
  if (!is_int16 && !is_float32)
    throw WavError(WavError::Kind::kUnsupportedCodec,
                   "unsupported WAV encoding in " + path.string() +
                       " (format tag " + std::to_string(fmt.format) + ", " +
                       std::to_string(fmt.bits_per_sample) +
                       " bits); only 16-bit PCM and 32-bit float are read");

  const std::size_t bytes_per_frame =
      static_cast<std::size_t>(fmt.channels) * (fmt.bits_per_sample / 8);
  const std::size_t num_frames = data_size / bytes_per_frame;
  if (num_frames == 0)
    throw WavError(WavError::Kind::kEmptyAudio,
                   "WAV file " + path.string() + " contains no samples");

  std::vector<double> samples(num_frames);
  for (std::size_t i = 0; i < num_frames; ++i) {
    const char *frame = data + i * bytes_per_frame;
    double sum = 0.0;
    for (uint16_t c = 0; c < fmt.channels; ++c) {
      if (is_int16) {
        int16_t s;
        std::memcpy(&s, frame + 2 * c, 2);
        sum += s / 32768.0;
      } else {
        float s;
        std::memcpy(&s, frame + 4 * c, 4);
        sum += s;
      }
    }
    samples[i] = sum / fmt.channels;
  }
  return AudioBuffer(std::move(samples), static_cast<int>(fmt.sample_rate));
}

int16_t QuantizeSample(double s) {
  double clamped = std::clamp(s, -1.0, 1.0);
  double q = std::round(clamped * 32768.0);
  return static_cast<int16_t>(std::clamp(q, -32768.0, 32767.0));
}

void WriteWav(const AudioBuffer &buffer, const std::filesystem::path &path) {
  const uint32_t data_bytes = static_cast<uint32_t>(buffer.Size() * 2);
  std::vector<char> out;
  out.reserve(44 + data_bytes);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_bytes);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, kFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(buffer.SampleRate()));
  PutU32(&out, static_cast<uint32_t>(buffer.SampleRate()) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  PutTag(&out, "data");
  PutU32(&out, data_bytes);
  for (double s : buffer.Samples()) {
    if (!std::isfinite(s))
      throw InvalidArgument("WriteWav: non-finite sample");
    PutU16(&out, static_cast<uint16_t>(QuantizeSample(s)));
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw WavError(WavError::Kind::kUnwritable,
                   "cannot open " + path.string() + " for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os)
    throw WavError(WavError::Kind::kUnwritable,
                   "write failed for " + path.string());
}

}  // namespace dysaug
