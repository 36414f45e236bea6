// Copyright 2026 The HQRN Authors
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

namespace hqrn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition (non-Hermitian, non-unitary,
/// out-of-range parameter, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not agree.
class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed or missing input data (IDX files, checkpoints, datasets).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss or could not make progress.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hqrn
