// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/cli.hpp"

int main(int argc, char** argv) { return signphon::cli_main(argc, argv); }
