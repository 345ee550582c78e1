// Copyright 2026 The sivstrain Authors
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

namespace sivstrain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A value violated a documented precondition or type invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// An operation received a tensor or vector expressed in the wrong frame.
class FrameMismatchError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Too little information in the data to determine a parameter.
class IllConditionedError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Query outside the tabulated range of a trajectory.
class RangeError : public Error {
  public:
    using Error::Error;
};

/// Two eigenstates needed as distinct are numerically degenerate.
class DegeneracyError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file. Carries the offending row (1-based, 0 if none).
class SchemaError : public Error {
  public:
    SchemaError(const std::string& what, int row = 0) : Error(what), row_(row) {}
    int row() const noexcept { return row_; }

  private:
    int row_;
};

}  // namespace sivstrain
