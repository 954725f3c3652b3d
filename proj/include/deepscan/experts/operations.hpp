// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "deepscan/experts/types.hpp"

namespace deepscan {

// Contract-checked entry points used by the pipeline. Backend answers that
// violate the output contract raise ProtocolError.

GrayMap search(const SearchExpert& expert, const FramedImage& patch, const Question& q);

/// Throws InvalidInput when `point` is outside the image.
BitMask segment(const VisualExpert& expert, const FramedImage& image, Point point);

/// Boxes are clipped to the view; boxes that vanish under clipping are dropped.
std::vector<BBox> detect(const VisualExpert& expert, const FramedImage& view, const Question& q);

/// Object list for `q`, cached in q.decomposed_targets. Falls back to
/// [q.text] when the response does not parse.
const std::vector<std::string>& decompose(const LvlmClient& lvlm, Question& q,
                                          const GenerationSettings& gen);

JudgeVerdict judge(const LvlmClient& lvlm, const FramedImage& image, const std::string& prompt,
                   Purpose purpose, const GenerationSettings& gen);

std::string answer(const LvlmClient& lvlm, std::span<const FramedImage> images, const Question& q,
                   const GenerationSettings& gen);

}  // namespace deepscan
