// core/src/toy-nnet-io.cc

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

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "dysaug/toy-nnet.h"

namespace dysaug {
namespace nnet {

namespace {

constexpr char kMagic[8] = {'D', 'Y', 'S', 'A', 'U', 'G', 'N', 'N'};
constexpr uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream &os) : os_(os) {}
  void U64(uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os_.write(reinterpret_cast<const char *>(b), 8);
  }
  void U32(uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os_.write(reinterpret_cast<const char *>(b), 4);
  }
  void I32(int v) { U32(static_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(const std::string &s) {
    U32(static_cast<uint32_t>(s.size()));
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream &os_;
};

class Reader {
 public:
  explicit Reader(std::istream &is) : is_(is) {}
  void Bytes(char *dst, std::size_t n) {
    if (!is_.read(dst, static_cast<std::streamsize>(n)))
      throw InvalidArgument("model file truncated");
  }
  uint64_t U64() {
    unsigned char b[8];
    Bytes(reinterpret_cast<char *>(b), 8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  uint32_t U32() {
    unsigned char b[4];
    Bytes(reinterpret_cast<char *>(b), 4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  int I32() { return static_cast<int>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const uint32_t n = U32();
    if (n > (1u << 20)) throw InvalidArgument("model file: implausible string");
    std::string s(n, '\0');
    Bytes(s.data(), n);
    return s;
  }

 private:
  std::istream &is_;
};

}  // namespace

void SaveModel(const ModelFile &model, const std::filesystem::path &path) {
  model.config.Check();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write model file " + path.string());
  os.write(kMagic, sizeof(kMagic));
  Writer w(os);
  w.U32(kVersion);

  const NetworkConfig &c = model.config;
  w.I32(c.input_dim);
  w.U32(static_cast<uint32_t>(c.hidden_dims.size()));
  for (int h : c.hidden_dims) w.I32(h);
  w.I32(c.bottleneck_dim);
  w.F64(c.dropout_rate);
  w.I32(c.n_triphone_targets);
  w.I32(c.n_monophone_targets);
  w.U32(static_cast<uint32_t>(c.skip_connections.size()));
  for (const auto &[from, to] : c.skip_connections) {
    w.I32(from);
    w.I32(to);
  }
  w.U32(c.lhuc_placement == LhucPlacement::kAfterBatchNorm ? 0 : 1);
  w.F64(c.batchnorm_epsilon);
  w.F64(c.batchnorm_momentum);

  // Shapes follow from the config; check before writing anything ambiguous.
  NetworkParams expect = InitParams(c, 0);
  auto have = model.params.All();
  auto want = expect.All();
  if (have.size() != want.size())
    throw InvalidArgument("SaveModel: parameters do not match config");
  for (std::size_t i = 0; i < have.size(); ++i)
    if (have[i].size() != want[i].size())
      throw InvalidArgument("SaveModel: parameters do not match config");
  for (auto s : have)
    for (double v : s) w.F64(v);

  w.U32(static_cast<uint32_t>(model.lhuc.speakers.size()));
  for (const auto &[spk, r] : model.lhuc.speakers) {
    w.Str(spk);
    w.U32(static_cast<uint32_t>(r.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i) w.F64(r(i));
  }
  if (!os) throw InvalidArgument("error writing model file " + path.string());
}

ModelFile LoadModel(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open model file " + path.string());
  Reader r(is);
  char magic[8];
  r.Bytes(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw InvalidArgument(path.string() + " is not a model file");
  const uint32_t version = r.U32();
  if (version != kVersion)
    throw InvalidArgument("unsupported model file version " +
                          std::to_string(version));

  ModelFile m;
  NetworkConfig &c = m.config;
  c.input_dim = r.I32();
  const uint32_t layers = r.U32();
  if (layers != kNumHiddenLayers)
    throw InvalidArgument("model file: wrong number of hidden layers");
  c.hidden_dims.assign(layers, 0);
  for (int &h : c.hidden_dims) h = r.I32();
  c.bottleneck_dim = r.I32();
  c.dropout_rate = r.F64();
  c.n_triphone_targets = r.I32();
  c.n_monophone_targets = r.I32();
  const uint32_t skips = r.U32();
  if (skips > 64) throw InvalidArgument("model file: implausible skip count");
  c.skip_connections.clear();
  for (uint32_t i = 0; i < skips; ++i) {
    const int from = r.I32();
    c.skip_connections.emplace_back(from, r.I32());
  }
  c.lhuc_placement = r.U32() == 0 ? LhucPlacement::kAfterBatchNorm
                                  : LhucPlacement::kBeforeBatchNorm;
  c.batchnorm_epsilon = r.F64();
  c.batchnorm_momentum = r.F64();
  c.Check();

  m.params = InitParams(c, 0);
  for (auto s : m.params.All())
    for (double &v : s) v = r.F64();

  const uint32_t speakers = r.U32();
  for (uint32_t i = 0; i < speakers; ++i) {
    std::string spk = r.Str();
    const uint32_t dim = r.U32();
    if (dim != static_cast<uint32_t>(c.hidden_dims[0]))
      throw InvalidArgument("model file: LHUC vector of wrong size");
    Vector v(dim);
    for (uint32_t k = 0; k < dim; ++k) v(k) = r.F64();
    m.lhuc.speakers.emplace(std::move(spk), std::move(v));
  }
  return m;
}

}  // namespace nnet
}  // namespace dysaug
