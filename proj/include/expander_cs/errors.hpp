// Copyright 2026 The expander-cs Authors.
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

namespace xcs {

// Thrown when a request exceeds one of the desk-scale enumeration or size
// limits (field order, subset budget, LP size).
class capacity_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

// An LP-backed estimator did not reach an optimal vertex.
class solver_error : public std::runtime_error {
 public:
  solver_error(LpStatus status, const std::string& what)
      : std::runtime_error(what + ": " + to_string(status)), status_(status) {}
  LpStatus status() const noexcept { return status_; }

 private:
  LpStatus status_;
};

}  // namespace xcs
