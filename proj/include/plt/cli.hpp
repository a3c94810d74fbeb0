// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plt::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;

/// Runs one pltc command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plt::cli
