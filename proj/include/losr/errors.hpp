// Copyright 2026 The losr Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace losr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Qubit count or matrix dimension outside the supported range.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// Scalar argument outside its mathematical domain.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Measurement layout or probability table does not provide what was asked for.
class LayoutError : public Error {
   public:
    using Error::Error;
};

/// Conditional expectation whose conditioning event has zero probability,
/// or an F denominator 1 + <C1> too close to zero.
class ConditioningError : public Error {
   public:
    using Error::Error;
};

/// Row that cannot be normalized (zero total).
class NormalizationError : public Error {
   public:
    using Error::Error;
};

/// Operation requested on an input it does not support (e.g. a mixed target state).
class UnsupportedError : public Error {
   public:
    using Error::Error;
};

/// Missing or out-of-range user supplied value.
class InputError : public Error {
   public:
    using Error::Error;
};

/// Inconsistent experiment description (space-time layout, delay chains).
class ConfigurationError : public Error {
   public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number, 0 when not line specific.
class ParseError : public Error {
   public:
    ParseError(std::size_t line, const std::string &what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {
    }
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

}  // namespace losr
