// Copyright 2026 The termgraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace termgraph {

enum class Errc {
  kEmptyDocument,
  kNoTermsFound,
  kFormatError,
  kZeroVector,
  kCycleDetected,
  kUnknownTerm,
  kNoPath,
  kNetworkError,
  kApiFormatError,
  kTooFewTerms,
  kBudgetTooSmall,
  kNumericalBlowup,
  kIoError,
  kUsage,
};

inline constexpr std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kEmptyDocument: return "EmptyDocument";
    case Errc::kNoTermsFound: return "NoTermsFound";
    case Errc::kFormatError: return "FormatError";
    case Errc::kZeroVector: return "ZeroVector";
    case Errc::kCycleDetected: return "CycleDetected";
    case Errc::kUnknownTerm: return "UnknownTerm";
    case Errc::kNoPath: return "NoPath";
    case Errc::kNetworkError: return "NetworkError";
    case Errc::kApiFormatError: return "ApiFormatError";
    case Errc::kTooFewTerms: return "TooFewTerms";
    case Errc::kBudgetTooSmall: return "BudgetTooSmall";
    case Errc::kNumericalBlowup: return "NumericalBlowup";
    case Errc::kIoError: return "IoError";
    case Errc::kUsage: return "UsageError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace termgraph
