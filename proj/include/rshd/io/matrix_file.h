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

#ifndef RSHD_IO_MATRIX_FILE_H_
#define RSHD_IO_MATRIX_FILE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "rshd/tensor/matrix.h"

namespace rshd {

// Layout, all little-endian:
//   "RSHD" | u16 version | u16 dtype | u32 rank | u64 dims[rank] | f64 payload
// Matrices are stored with rank 2, row-major.
inline constexpr std::uint16_t kMatrixFileVersion = 1;
inline constexpr std::uint16_t kDtypeF64 = 1;

struct MatrixShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

std::string EncodeMatrix(const Matrix& m);

// Decodes one record starting at `offset` of `bytes` and advances `offset`
// past it. Errors name the absolute byte offset where decoding failed.
Matrix DecodeMatrix(std::string_view bytes, std::size_t& offset);
// Whole-buffer decode; trailing bytes are an error.
Matrix DecodeMatrix(std::string_view bytes);

void SaveMatrix(const std::filesystem::path& path, const Matrix& m);
Matrix LoadMatrix(const std::filesystem::path& path);
// Reads only the header and checks the file size against it.
MatrixShape PeekMatrixShape(const std::filesystem::path& path);

}  // namespace rshd

#endif  // RSHD_IO_MATRIX_FILE_H_
