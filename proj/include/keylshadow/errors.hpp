// Copyright 2026 The keylshadow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace keylshadow {

/// Base class for all keylshadow exceptions.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// A configured resource cap (matrix dimension, enumeration size) was exceeded.
class ResourceError : public Error {
  public:
    explicit ResourceError(const std::string &msg) : Error(msg) {}
};

/// A sampling procedure failed to terminate (e.g. rejection cap hit).
class SamplingError : public Error {
  public:
    explicit SamplingError(const std::string &msg) : Error(msg) {}
};

/// A mathematical invariant that should hold by construction was violated.
class InvariantError : public Error {
  public:
    explicit InvariantError(const std::string &msg) : Error(msg) {}
};

/// User-supplied input failed validation.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

} // namespace keylshadow
