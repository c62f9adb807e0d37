//
// Copyright 2026 The quantdp Authors
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
//

#ifndef QUANTDP_ERROR_HPP_
#define QUANTDP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace quantdp {

enum class ErrorCode {
  kDimension,
  kInstability,
  kSingular,
  kInfeasible,
  kUncontrollable,
  kNotConverged,
  kUnsupportedRegime,
  kUnsupportedStructure,
  kHypothesisViolated,
  kEnumerationLimit,
  kConfiguration,
  kValidation,
  kDivergence,
};

// Stable lowercase identifier, used in machine-parsable CLI error lines.
constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kInstability: return "instability";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kUncontrollable: return "uncontrollable";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kUnsupportedRegime: return "unsupported_regime";
    case ErrorCode::kUnsupportedStructure: return "unsupported_structure";
    case ErrorCode::kHypothesisViolated: return "hypothesis_violated";
    case ErrorCode::kEnumerationLimit: return "enumeration_limit";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kDivergence: return "divergence";
  }
  return "unknown";
}

// All library failures are reported through this exception type; the code
// classifies the failure and drives the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the simulator when a state leaves the finite range.
class DivergenceError : public Error {
 public:
  DivergenceError(long step, const std::string& message)
      : Error(ErrorCode::kDivergence, message), step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

// Raised when the regulator equations have no consistent solution.
class InfeasibleError : public Error {
 public:
  InfeasibleError(double residual, const std::string& message)
      : Error(ErrorCode::kInfeasible, message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace quantdp

#endif  // QUANTDP_ERROR_HPP_
