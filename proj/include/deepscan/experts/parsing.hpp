// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deepscan/experts/types.hpp"

namespace deepscan {

inline constexpr int kVerdictTokenWindow = 10;

/// Items of the outermost [...] span, split on commas with quotes and
/// whitespace stripped. Empty optional when there is no bracketed list or
/// it holds no non-empty item.
std::optional<std::vector<std::string>> parse_object_list(std::string_view text);

/// Looks for "yes"/"no" among the first kVerdictTokenWindow whitespace
/// tokens (letters only, case-folded). Total: never throws.
JudgeVerdict parse_verdict(std::string_view text);

/// First standalone token that is a single option letter (A-D by default,
/// case-insensitive), returned upper-case.
std::optional<char> extract_option_letter(std::string_view text, int n_options = 4);

}  // namespace deepscan
