// Copyright 2026 The f0vote Authors
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

#ifndef F0VOTE_ERROR_HPP_
#define F0VOTE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace f0vote {

// Malformed, missing, or inconsistent input data (bad file, unknown
// reference, grid mismatch).  Maps to CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input on which the requested quantity is undefined
// (all-unvoiced reference, empty denominator, fewer than two paired
// frames).  Maps to CLI exit code 4.
class DegenerateInput : public std::runtime_error {
 public:
  explicit DegenerateInput(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace f0vote

#endif  // F0VOTE_ERROR_HPP_
