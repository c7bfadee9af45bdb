// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_ERRORS_HPP
#define SIGNPHON_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace signphon {

/// Category of a library failure. The CLI prints it as the first field of
/// its one-line error report, so the spelling is part of the interface.
enum class ErrorKind {
  kDimension,   // tensor shapes disagree
  kRange,       // an index or argument lies outside its domain
  kNumeric,     // NaN / non-finite values
  kUsage,       // API misuse (e.g. backward on a non-scalar)
  kValidation,  // data that violates the taxonomy or a file contract
  kConfig,      // invalid plan / split / synthesis configuration
  kShape,       // checkpoint weights disagree with the model geometry
  kIo,          // filesystem failures
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define SIGNPHON_DEFINE_ERROR(Name, Kind)                  \
  class Name : public Error {                              \
   public:                                                 \
    explicit Name(const std::string& message)              \
        : Error(ErrorKind::Kind, message) {}               \
  };

SIGNPHON_DEFINE_ERROR(DimensionError, kDimension)
SIGNPHON_DEFINE_ERROR(RangeError, kRange)
SIGNPHON_DEFINE_ERROR(NumericError, kNumeric)
SIGNPHON_DEFINE_ERROR(UsageError, kUsage)
SIGNPHON_DEFINE_ERROR(ValidationError, kValidation)
SIGNPHON_DEFINE_ERROR(ConfigError, kConfig)
SIGNPHON_DEFINE_ERROR(ShapeError, kShape)
SIGNPHON_DEFINE_ERROR(IoError, kIo)

#undef SIGNPHON_DEFINE_ERROR

}  // namespace signphon

#endif  // SIGNPHON_ERRORS_HPP
