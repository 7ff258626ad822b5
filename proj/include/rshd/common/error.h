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

#ifndef RSHD_COMMON_ERROR_H_
#define RSHD_COMMON_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rshd {

// Error categories. The CLI folds these into config | data | numeric | io.
enum class ErrorCategory {
  kConfig,
  kData,
  kNumeric,
  kIo,
  kDimension,
  kContract,
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message);

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] void ThrowConfig(const std::string& message);
[[noreturn]] void ThrowData(const std::string& message);
[[noreturn]] void ThrowNumeric(const std::string& message);
[[noreturn]] void ThrowIo(const std::string& message);
[[noreturn]] void ThrowContract(const std::string& message);
[[noreturn]] void ThrowDimension(std::string_view op, std::size_t rows_a,
                                 std::size_t cols_a, std::size_t rows_b,
                                 std::size_t cols_b);

}  // namespace rshd

#endif  // RSHD_COMMON_ERROR_H_
