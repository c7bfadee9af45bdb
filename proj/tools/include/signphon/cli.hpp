// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SIGNPHON_CLI_HPP
#define SIGNPHON_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace signphon {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a library error (see ErrorKind)
inline constexpr int kExitUsage = 2;    // bad flags or arguments

/// Runs one `signphon` invocation. `args[0]` is the program name. Progress
/// goes to `out`; failures print a single line "error: <kind>: <message>"
/// to `err` (usage errors follow it with the help text).
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int cli_main(int argc, const char* const* argv);

}  // namespace signphon

#endif  // SIGNPHON_CLI_HPP
