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

#include "rshd/common/error.h"

#include <sstream>

namespace rshd {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kData:
      return "data";
    case ErrorCategory::kNumeric:
      return "numeric";
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kDimension:
      return "dimension";
    case ErrorCategory::kContract:
      return "contract";
  }
  return "unknown";
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

void ThrowConfig(const std::string& message) {
  throw Error(ErrorCategory::kConfig, message);
}

void ThrowData(const std::string& message) {
  throw Error(ErrorCategory::kData, message);
}

void ThrowNumeric(const std::string& message) {
  throw Error(ErrorCategory::kNumeric, message);
}

void ThrowIo(const std::string& message) {
  throw Error(ErrorCategory::kIo, message);
}

void ThrowContract(const std::string& message) {
  throw Error(ErrorCategory::kContract, message);
}

void ThrowDimension(std::string_view op, std::size_t rows_a, std::size_t cols_a,
                    std::size_t rows_b, std::size_t cols_b) {
  std::ostringstream os;
  os << op << ": shape mismatch " << rows_a << "x" << cols_a << " vs "
     << rows_b << "x" << cols_b;
  throw Error(ErrorCategory::kDimension, os.str());
}

}  // namespace rshd
