// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "deepscan/experts/types.hpp"
#include "deepscan/synth/scene.hpp"

namespace deepscan::synth {

inline constexpr double kFullCoverage = 0.99;

/// Lower-cased words of `text` minus question stopwords.
std::vector<std::string> content_tokens(std::string_view text);

/// Scene labels occurring in `text` (case-insensitive), by first occurrence.
std::vector<std::string> labels_in(const SceneSpec& spec, std::string_view text);

/// Fraction of the object's mask inside `region`.
double coverage(const SceneObject& obj, const BBox& region);

/// Ground-truth experts for one scene. Every answer is a pure function of
/// the spec and the request; image pixels are ignored, frames are not.
///
/// search:   clipped Gaussian bump (sigma = half the circumscribed radius)
///           per object sharing a content word with the question
/// segment:  the mask of the object under the point
/// detect:   boxes of objects whose full label appears in the query
/// complete: decomposition, both judgments and the final answer, chosen by
///           the prompt text
class OracleExperts final : public SearchExpert, public VisualExpert, public LvlmClient {
public:
    explicit OracleExperts(SceneSpec spec);

    GrayMap search(const FramedImage& patch, const Question& q) const override;
    BitMask segment(const FramedImage& image, Point point) const override;
    std::vector<BBox> detect(const FramedImage& view, const Question& q) const override;
    std::string complete(const CompletionRequest& request) const override;

    /// Evidence judgment: some question subject is fully inside `region`.
    bool judge_evidence(const std::string& question, const BBox& region) const;
    /// View completeness: every listed object is fully inside `region`.
    bool judge_complete(const std::vector<std::string>& targets, const BBox& region) const;
    /// Letter of the option matching the truth when every subject is fully
    /// inside one of `regions`, else the first wrong option.
    char answer_letter(const std::vector<std::string>& options, const std::vector<BBox>& regions) const;

    const SceneSpec& spec() const noexcept { return spec_; }

private:
    std::vector<std::string> subjects_of(std::string_view question) const;

    SceneSpec spec_;
};

ExpertBundle make_oracle_experts(SceneSpec spec);

}  // namespace deepscan::synth
