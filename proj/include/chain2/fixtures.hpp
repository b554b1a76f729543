// chain2: a miniature Ethereum-style execution model and security lab
// Copyright 2026 The chain2 Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

/// Contract sources from fixtures/*.mvm, compiled into the library.
namespace chain2::fixtures
{
/// Assembly text of the named fixture (file stem); throws std::out_of_range if unknown.
std::string_view source(std::string_view name);

/// Every fixture name, sorted.
std::vector<std::string_view> names();

}  // namespace chain2::fixtures
