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

#ifndef RSHD_IO_SALIENCY_IO_H_
#define RSHD_IO_SALIENCY_IO_H_

#include <filesystem>

#include "json.hpp"
#include "rshd/saliency/smoothgrad.h"

namespace rshd {

// <dir>/manifest.jsonl plus <dir>/x/<id>.rshd and <dir>/s/<id>.rshd. The
// header records the provenance, `seed` and a config digest over both.
void SaveSaliencyDataset(const std::filesystem::path& dir,
                         const SaliencyDataset& dataset, std::uint64_t seed,
                         bool force);
SaliencyDataset LoadSaliencyDataset(const std::filesystem::path& path);

nlohmann::json SaliencyHeader(const SaliencyDataset& dataset, std::uint64_t seed);

}  // namespace rshd

#endif  // RSHD_IO_SALIENCY_IO_H_
