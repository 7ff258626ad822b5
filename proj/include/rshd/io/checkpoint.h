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

#ifndef RSHD_IO_CHECKPOINT_H_
#define RSHD_IO_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rshd/models/embedder.h"
#include "rshd/models/pooled.h"
#include "rshd/models/pse.h"
#include "rshd/tensor/matrix.h"
#include "rshd/tensor/optim.h"

namespace rshd {

// Layout, little-endian:
//   "RSHDCKPT" | u16 version | u64 n | n bytes of JSON metadata
//   | u32 tensor count | per tensor: u32 name length, name, MatrixFile record
// The metadata object holds "kind", "arch" and "provenance".
struct Checkpoint {
  std::string kind;
  nlohmann::json arch;
  // Must carry "seed" and "config_digest".
  nlohmann::json provenance;
  std::vector<std::pair<std::string, Matrix>> tensors;
};

std::string EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(std::string_view bytes);
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

Checkpoint MakeCheckpoint(std::string kind, nlohmann::json arch,
                          const std::vector<NamedParameter>& params,
                          nlohmann::json provenance);

// Copies tensor values into `params`. Names, order and shapes must match.
void LoadParameters(const Checkpoint& ckpt, const std::vector<NamedParameter>& params);

Checkpoint ToCheckpoint(const SidModel& m, nlohmann::json provenance);
Checkpoint ToCheckpoint(const ClassifierModel& m, nlohmann::json provenance);
Checkpoint ToCheckpoint(const EmbedderModel& m, nlohmann::json provenance);
Checkpoint ToCheckpoint(const PseModel& m, nlohmann::json provenance);

// Each throws a data error if the checkpoint holds a different kind.
SidModel SidFromCheckpoint(const Checkpoint& ckpt);
ClassifierModel ClassifierFromCheckpoint(const Checkpoint& ckpt);
EmbedderModel EmbedderFromCheckpoint(const Checkpoint& ckpt);
PseModel PseFromCheckpoint(const Checkpoint& ckpt);

}  // namespace rshd

#endif  // RSHD_IO_CHECKPOINT_H_
