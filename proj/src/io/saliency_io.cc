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

#include "rshd/io/saliency_io.h"

#include <set>
#include <sstream>

#include "rshd/common/error.h"
#include "rshd/io/config_json.h"
#include "rshd/io/digest.h"
#include "rshd/io/files.h"
#include "rshd/io/manifest.h"
#include "rshd/io/matrix_file.h"

namespace rshd {
namespace {

using nlohmann::json;

std::string Field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    ThrowData(where + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

json SaliencyHeader(const SaliencyDataset& dataset, std::uint64_t seed) {
  json provenance{{"sid_checkpoint", dataset.provenance.sid_checkpoint},
                  {"smoothgrad", dataset.provenance.smoothgrad}};
  return json{{"type", "header"},
              {"format", "rshd-saliency"},
              {"version", 1},
              {"provenance", provenance},
              {"seed", seed},
              {"config_digest", ConfigDigest(provenance)}};
}

void SaveSaliencyDataset(const std::filesystem::path& dir,
                         const SaliencyDataset& dataset, std::uint64_t seed,
                         bool force) {
  const auto manifest_path = dir / kManifestFileName;
  CheckWritable(manifest_path, force);
  std::string text = SaliencyHeader(dataset, seed).dump() + "\n";
  std::set<std::string> ids;
  for (const auto& p : dataset.pairs) {
    if (!ids.insert(p.id).second) ThrowData("duplicate saliency id '" + p.id + "'");
    if (p.id.empty() || p.id.find_first_of("/\\") != std::string::npos) {
      ThrowData("invalid saliency id '" + p.id + "'");
    }
    const std::string x_rel = "x/" + p.id + ".rshd";
    const std::string s_rel = "s/" + p.id + ".rshd";
    SaveMatrix(dir / x_rel, p.x);
    SaveMatrix(dir / s_rel, p.saliency.values());
    text += json{{"id", p.id}, {"x", x_rel}, {"s", s_rel},
                 {"t", p.x.rows()}, {"d", p.x.cols()}}
                .dump();
    text.push_back('\n');
  }
  WriteFileAtomic(manifest_path, text);
}

SaliencyDataset LoadSaliencyDataset(const std::filesystem::path& path) {
  const auto file = ResolveManifestPath(path);
  const auto dir = file.parent_path();
  std::istringstream in(ReadFileBytes(file));
  std::string line;
  std::size_t line_no = 0;
  SaliencyDataset out;
  bool have_header = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = file.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      ThrowData(where + ": malformed JSON");
    }
    if (!have_header) {
      if (!j.is_object() || j.value("format", "") != "rshd-saliency") {
        ThrowData(where + ": not a saliency dataset header");
      }
      if (!j.contains("provenance") || !j["provenance"].is_object()) {
        ThrowData(where + ": header lacks provenance");
      }
      const auto& prov = j["provenance"];
      out.provenance.sid_checkpoint = Field(prov, "sid_checkpoint", where);
      try {
        out.provenance.smoothgrad = prov.at("smoothgrad").get<SmoothGradConfig>();
      } catch (const json::exception&) {
        ThrowData(where + ": missing smoothgrad provenance");
      }
      have_header = true;
      continue;
    }
    SaliencyPair p;
    p.id = Field(j, "id", where);
    if (!ids.insert(p.id).second) ThrowData(where + ": duplicate id '" + p.id + "'");
    p.x = LoadMatrix(dir / Field(j, "x", where));
    Matrix s = LoadMatrix(dir / Field(j, "s", where));
    if (s.rows() != p.x.rows() || s.cols() != p.x.cols()) {
      ThrowData(where + ": saliency and feature shapes differ");
    }
    if (j.value("t", std::size_t{0}) != p.x.rows() ||
        j.value("d", std::size_t{0}) != p.x.cols()) {
      ThrowData(where + ": declared shape does not match files");
    }
    p.saliency = SaliencyMap(std::move(s));
    out.pairs.push_back(std::move(p));
  }
  if (!have_header) ThrowData(file.string() + ": missing header");
  return out;
}

}  // namespace rshd
