// Copyright 2026 The collabkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace collabkit {

// Exit codes used by the CLI. Library code signals these by exception type.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     // malformed input, bad configuration
inline constexpr int kExitInternal = 3;  // an internal invariant was violated

// Bad input data or configuration. Maps to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant (a bug, not a user error). Maps to exit code 3.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require_input(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

inline void check_invariant(bool ok, const std::string& message) {
  if (!ok) throw InvariantError(message);
}

}  // namespace collabkit
