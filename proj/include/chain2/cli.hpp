// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chain2::cli
{
inline constexpr int kExitOk = 0;
/// Domain error; stdout carries {"error": ...}.
inline constexpr int kExitError = 1;
/// Analysis produced at least one high-severity finding.
inline constexpr int kExitFindings = 2;
/// Unknown subcommand or malformed flags (EX_USAGE).
inline constexpr int kExitUsage = 64;

/// Runs one command line, program name excluded. The result document goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chain2::cli
