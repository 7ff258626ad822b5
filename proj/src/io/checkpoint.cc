// Copyright 2026 The rshd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rshd/io/checkpoint.h"

#include <cstdint>
#include <cstring>

#include "rshd/common/error.h"
#include "rshd/common/rng.h"
#include "rshd/io/config_json.h"
#include "rshd/io/files.h"
#include "rshd/io/matrix_file.h"

namespace rshd {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'R', 'S', 'H', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void PutLe(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

template <typename T>
T TakeLe(std::string_view bytes, std::size_t& at, const char* what) {
  if (bytes.size() < at || bytes.size() - at < sizeof(T)) {
    ThrowIo(std::string("checkpoint: truncated ") + what + " at offset " +
            std::to_string(bytes.size()));
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  at += sizeof(T);
  return v;
}

std::string_view TakeBytes(std::string_view bytes, std::size_t& at, std::uint64_t n,
                           const char* what) {
  if (bytes.size() < at || bytes.size() - at < n) {
    ThrowIo(std::string("checkpoint: truncated ") + what + " at offset " +
            std::to_string(bytes.size()));
  }
  std::string_view out = bytes.substr(at, n);
  at += n;
  return out;
}

void ExpectKind(const Checkpoint& ckpt, std::string_view kind) {
  if (ckpt.kind != kind) {
    ThrowData("checkpoint holds a '" + ckpt.kind + "' model, expected '" +
              std::string(kind) + "'");
  }
}

template <typename Config>
Config ArchAs(const Checkpoint& ckpt) {
  Config c{};
  try {
    c = ckpt.arch.get<Config>();
  } catch (const Error& e) {
    ThrowData(std::string("checkpoint arch: ") + e.what());
  }
  return c;
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  const std::string meta =
      json{{"kind", ckpt.kind}, {"arch", ckpt.arch}, {"provenance", ckpt.provenance}}
          .dump();
  std::string out(kMagic, 8);
  PutLe<std::uint16_t>(out, kVersion);
  PutLe<std::uint64_t>(out, meta.size());
  out += meta;
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, m] : ckpt.tensors) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    out += EncodeMatrix(m);
  }
  return out;
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  std::size_t at = 0;
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    ThrowIo("checkpoint: bad magic at offset 0");
  }
  at = 8;
  const std::size_t version_at = at;
  if (TakeLe<std::uint16_t>(bytes, at, "version") != kVersion) {
    ThrowIo("checkpoint: unsupported version at offset " + std::to_string(version_at));
  }
  const auto meta_len = TakeLe<std::uint64_t>(bytes, at, "metadata length");
  const std::size_t meta_at = at;
  const auto meta_text = TakeBytes(bytes, at, meta_len, "metadata");
  json meta;
  try {
    meta = json::parse(meta_text);
  } catch (const json::parse_error&) {
    ThrowIo("checkpoint: corrupt metadata at offset " + std::to_string(meta_at));
  }
  if (!meta.is_object() || !meta.contains("kind") || !meta["kind"].is_string()) {
    ThrowIo("checkpoint: metadata lacks a kind at offset " + std::to_string(meta_at));
  }
  Checkpoint ckpt;
  ckpt.kind = meta["kind"].get<std::string>();
  ckpt.arch = meta.value("arch", json::object());
  ckpt.provenance = meta.value("provenance", json::object());
  const auto count = TakeLe<std::uint32_t>(bytes, at, "tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = TakeLe<std::uint32_t>(bytes, at, "tensor name length");
    std::string name(TakeBytes(bytes, at, name_len, "tensor name"));
    Matrix m = DecodeMatrix(bytes, at);
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (at != bytes.size()) {
    ThrowIo("checkpoint: trailing bytes at offset " + std::to_string(at));
  }
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  WriteFileAtomic(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  try {
    return DecodeCheckpoint(ReadFileBytes(path));
  } catch (const Error& e) {
    ThrowIo(path.string() + ": " + e.what());
  }
}

Checkpoint MakeCheckpoint(std::string kind, json arch,
                          const std::vector<NamedParameter>& params,
                          json provenance) {
  if (!provenance.contains("seed") || !provenance.contains("config_digest")) {
    ThrowContract("checkpoint provenance needs seed and config_digest");
  }
  Checkpoint ckpt{std::move(kind), std::move(arch), std::move(provenance), {}};
  for (const auto& p : params) ckpt.tensors.emplace_back(p.name, p.tensor.value());
  return ckpt;
}

void LoadParameters(const Checkpoint& ckpt, const std::vector<NamedParameter>& params) {
  if (ckpt.tensors.size() != params.size()) {
    ThrowData("checkpoint has " + std::to_string(ckpt.tensors.size()) +
              " tensors, model expects " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, m] = ckpt.tensors[i];
    if (name != params[i].name) {
      ThrowData("checkpoint tensor '" + name + "' where '" + params[i].name +
                "' was expected");
    }
    Tensor t = params[i].tensor;
    if (m.rows() != t.rows() || m.cols() != t.cols()) {
      ThrowData("checkpoint tensor '" + name + "' has the wrong shape");
    }
    if (!m.AllFinite()) ThrowData("checkpoint tensor '" + name + "' is not finite");
    t.mutable_value() = m;
  }
}

Checkpoint ToCheckpoint(const SidModel& m, json provenance) {
  return MakeCheckpoint("sid", m.config(), m.Parameters(), std::move(provenance));
}

Checkpoint ToCheckpoint(const ClassifierModel& m, json provenance) {
  return MakeCheckpoint("classifier", m.config(), m.Parameters(), std::move(provenance));
}

Checkpoint ToCheckpoint(const EmbedderModel& m, json provenance) {
  return MakeCheckpoint("embedder", m.config(), m.Parameters(), std::move(provenance));
}

Checkpoint ToCheckpoint(const PseModel& m, json provenance) {
  return MakeCheckpoint("pse", m.config(), m.Parameters(), std::move(provenance));
}

SidModel SidFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, "sid");
  Rng rng = MakeStream(0);
  SidModel m(ArchAs<PooledLinearConfig>(ckpt), rng);
  LoadParameters(ckpt, m.Parameters());
  return m;
}

ClassifierModel ClassifierFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, "classifier");
  Rng rng = MakeStream(0);
  ClassifierModel m(ArchAs<PooledLinearConfig>(ckpt), rng);
  LoadParameters(ckpt, m.Parameters());
  return m;
}

EmbedderModel EmbedderFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, "embedder");
  Rng rng = MakeStream(0);
  EmbedderModel m(ArchAs<EmbedderConfig>(ckpt), rng);
  LoadParameters(ckpt, m.Parameters());
  return m;
}

PseModel PseFromCheckpoint(const Checkpoint& ckpt) {
  ExpectKind(ckpt, "pse");
  Rng rng = MakeStream(0);
  PseModel m(ArchAs<PseConfig>(ckpt), rng);
  LoadParameters(ckpt, m.Parameters());
  return m;
}

}  // namespace rshd
