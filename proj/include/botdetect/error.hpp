/*
Copyright 2026 The botdetect Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef BOTDETECT_ERROR_HPP
#define BOTDETECT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace botdetect {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command-line usage (CLI exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class DataErrorKind {
  kIo,
  kMalformed,
  kDuplicateId,
  kUnknownId,
  kMissingColumn,
  kEmptyMask,
  kBadMagic,
  kTruncated,
  kCountMismatch,
  kShapeMismatch,
};

/// Invalid or inconsistent input data (CLI exit code 3).
class DataError : public Error {
 public:
  DataError(DataErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  DataErrorKind kind() const noexcept { return kind_; }

 private:
  DataErrorKind kind_;
};

/// Tensor shapes that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or divergence (CLI exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace botdetect

#endif  // BOTDETECT_ERROR_HPP
