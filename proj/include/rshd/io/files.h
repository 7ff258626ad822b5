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

#ifndef RSHD_IO_FILES_H_
#define RSHD_IO_FILES_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace rshd {

std::string ReadFileBytes(const std::filesystem::path& path);

// Writes to a sibling temporary and renames, so readers never observe a
// partial file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);

// Throws an io error if `path` exists and `force` is false.
void CheckWritable(const std::filesystem::path& path, bool force);

}  // namespace rshd

#endif  // RSHD_IO_FILES_H_
