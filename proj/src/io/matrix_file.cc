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

#include "rshd/io/matrix_file.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "rshd/common/error.h"
#include "rshd/io/files.h"

namespace rshd {
namespace {

constexpr char kMagic[4] = {'R', 'S', 'H', 'D'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 4;

template <typename T>
void PutLe(std::string& out, T v) {
  using U = std::make_unsigned_t<T>;
  U u = static_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  }
}

template <typename T>
T GetLe(std::string_view bytes, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  }
  return v;
}

[[noreturn]] void Fail(std::size_t offset, const std::string& what) {
  ThrowIo("matrix file: " + what + " at offset " + std::to_string(offset));
}

void Need(std::string_view bytes, std::size_t at, std::size_t n,
          const char* what) {
  if (bytes.size() < at || bytes.size() - at < n) {
    Fail(bytes.size(), std::string("truncated ") + what);
  }
}

}  // namespace

std::string EncodeMatrix(const Matrix& m) {
  std::string out;
  out.reserve(kHeaderBytes + 16 + 8 * m.size());
  out.append(kMagic, 4);
  PutLe<std::uint16_t>(out, kMatrixFileVersion);
  PutLe<std::uint16_t>(out, kDtypeF64);
  PutLe<std::uint32_t>(out, 2);
  PutLe<std::uint64_t>(out, m.rows());
  PutLe<std::uint64_t>(out, m.cols());
  for (double v : m.data()) PutLe<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Matrix DecodeMatrix(std::string_view bytes, std::size_t& offset) {
  const std::size_t start = offset;
  Need(bytes, start, kHeaderBytes, "header");
  if (std::memcmp(bytes.data() + start, kMagic, 4) != 0) Fail(start, "bad magic");
  const auto version = GetLe<std::uint16_t>(bytes, start + 4);
  if (version != kMatrixFileVersion) {
    Fail(start + 4, "unsupported version " + std::to_string(version));
  }
  const auto dtype = GetLe<std::uint16_t>(bytes, start + 6);
  if (dtype != kDtypeF64) Fail(start + 6, "unsupported dtype " + std::to_string(dtype));
  const auto rank = GetLe<std::uint32_t>(bytes, start + 8);
  if (rank != 2) Fail(start + 8, "expected rank 2, got " + std::to_string(rank));
  std::size_t at = start + kHeaderBytes;
  Need(bytes, at, 16, "dims");
  const auto rows = GetLe<std::uint64_t>(bytes, at);
  const auto cols = GetLe<std::uint64_t>(bytes, at + 8);
  if (rows == 0 || cols == 0) Fail(at, "zero dimension");
  if (rows > std::numeric_limits<std::size_t>::max() / 8 / cols) {
    Fail(at, "dimension overflow");
  }
  at += 16;
  const std::size_t n = rows * cols;
  Need(bytes, at, 8 * n, "payload");
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = std::bit_cast<double>(GetLe<std::uint64_t>(bytes, at + 8 * i));
  }
  offset = at + 8 * n;
  return Matrix(rows, cols, std::move(data));
}

Matrix DecodeMatrix(std::string_view bytes) {
  std::size_t offset = 0;
  Matrix m = DecodeMatrix(bytes, offset);
  if (offset != bytes.size()) Fail(offset, "trailing bytes");
  return m;
}

void SaveMatrix(const std::filesystem::path& path, const Matrix& m) {
  WriteFileAtomic(path, EncodeMatrix(m));
}

Matrix LoadMatrix(const std::filesystem::path& path) {
  try {
    return DecodeMatrix(ReadFileBytes(path));
  } catch (const Error& e) {
    ThrowIo(path.string() + ": " + e.what());
  }
}

MatrixShape PeekMatrixShape(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open " + path.string() + " for reading");
  std::string head(kHeaderBytes + 16, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  try {
    Need(head, 0, kHeaderBytes + 16, "header");
    if (std::memcmp(head.data(), kMagic, 4) != 0) Fail(0, "bad magic");
    if (GetLe<std::uint16_t>(head, 4) != kMatrixFileVersion) Fail(4, "unsupported version");
    if (GetLe<std::uint16_t>(head, 6) != kDtypeF64) Fail(6, "unsupported dtype");
    if (GetLe<std::uint32_t>(head, 8) != 2) Fail(8, "expected rank 2");
    MatrixShape shape{GetLe<std::uint64_t>(head, 12), GetLe<std::uint64_t>(head, 20)};
    const auto size = std::filesystem::file_size(path);
    if (size != kHeaderBytes + 16 + 8 * shape.rows * shape.cols) {
      Fail(size, "payload size does not match dims");
    }
    return shape;
  } catch (const Error& e) {
    ThrowIo(path.string() + ": " + e.what());
  }
}

}  // namespace rshd
