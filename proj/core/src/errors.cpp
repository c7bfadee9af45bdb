// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/errors.hpp"

namespace signphon {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace signphon
