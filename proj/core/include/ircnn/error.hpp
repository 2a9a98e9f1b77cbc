// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ircnn {

/// Process exit codes used by the CLI. Library errors carry the code they
/// should map to so every failure path lands on the documented contract.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Bad flag values, out-of-range arguments, contract misuse by the caller.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ExitCode::kUsage, what) {}
};

/// Malformed or missing input data: files, shapes, formats.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

/// Non-finite values, diverged training, failed numerical checks.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ExitCode::kNumeric, what) {}
};

/// Model file rejection reasons. Each maps to its own failure so tests and
/// callers can tell a truncated file from a wrong-architecture one.
class ModelFormatError : public DataError {
 public:
  enum class Kind { kBadMagic, kBadVersion, kTruncated, kShapeChain, kTrailingBytes };

  ModelFormatError(Kind kind, const std::string& what)
      : DataError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// PPM decode rejection reasons.
class ImageFormatError : public DataError {
 public:
  enum class Kind { kBadHeader, kUnsupportedType, kBadMaxval, kTruncated };

  ImageFormatError(Kind kind, const std::string& what)
      : DataError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ircnn
