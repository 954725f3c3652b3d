// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "deepscan/experts/types.hpp"

namespace deepscan::prompts {

extern const std::string_view kSystem;
/// Slot: {question}
extern const std::string_view kEvidenceDecomposition;
/// Slot: {question}
extern const std::string_view kEvidenceJudgment;
/// Slot: {target_list}
extern const std::string_view kViewCompleteness;
/// Slot: {question}
extern const std::string_view kReasoning;

/// Replaces every occurrence of `{slot}` in `tmpl` with `value`.
std::string render(std::string_view tmpl, std::string_view slot, std::string_view value);

/// Python-style list literal: ['a', 'b'].
std::string format_target_list(std::span<const std::string> targets);

/// Question stem followed by one "(A) option" line per option.
std::string format_with_options(const Question& q);

std::string decomposition(const Question& q);
std::string evidence_judgment(const Question& q);
std::string view_completeness(std::span<const std::string> targets);
std::string reasoning(const Question& q);

}  // namespace deepscan::prompts
