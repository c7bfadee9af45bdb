// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_UTIL_HPP
#define SIGNPHON_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace signphon {

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace signphon

#endif  // SIGNPHON_UTIL_HPP
