// dysaug/wav-io.h

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

#ifndef DYSAUG_WAV_IO_H_
#define DYSAUG_WAV_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "dysaug/audio-buffer.h"
#include "dysaug/error.h"

namespace dysaug {

class WavError : public Error {
 public:
  enum class Kind {
    kMissingFile,
    kUnsupportedCodec,
    kEmptyAudio,
    kMalformed,
    kUnwritable,
  };

  WavError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Reads a RIFF/WAVE file holding 16-bit integer or 32-bit float PCM
/// (plain or WAVE_FORMAT_EXTENSIBLE). Integer samples map to s / 32768;
/// multichannel audio is downmixed by averaging the channels.
AudioBuffer ReadWav(const std::filesystem::path &path);

/// Writes a canonical 44-byte-header, mono, 16-bit little-endian WAV.
/// Samples are clamped to [-1, 1] and quantized as round(s * 32768), then
/// clamped to the int16 range, which makes ReadWav(WriteWav(x)) exact to
/// within 1/32768.
void WriteWav(const AudioBuffer &buffer, const std::filesystem::path &path);

/// Quantization used by WriteWav, exposed for tests and tools.
int16_t QuantizeSample(double s);

}  // namespace dysaug

#endif  // DYSAUG_WAV_IO_H_
