// Copyright 2026 The IFM Simulator Authors
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

#ifndef IFM_ERRORS_HPP
#define IFM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ifm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A mode label or other structural reference does not resolve.
class StructuralError : public Error {
  public:
    using Error::Error;
};

/// A state invariant (e.g. norm <= 1) was found violated.
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

class TimeoutError : public Error {
  public:
    using Error::Error;
};

/// Trajectory came within the singularity cutoff of a point source.
class SingularityError : public Error {
  public:
    using Error::Error;
};

class BracketError : public Error {
  public:
    using Error::Error;
};

/// A measurement-protocol precondition (calibration, monotone scan) failed.
class ProtocolError : public Error {
  public:
    using Error::Error;
};

}  // namespace ifm

#endif  // IFM_ERRORS_HPP
