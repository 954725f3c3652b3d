// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/prompts.hpp"

namespace deepscan::prompts {

const std::string_view kSystem =
    "You are an advanced image understanding assistant. You will be given an image and a "
    "question about it.";

const std::string_view kEvidenceDecomposition =
    "Task: List objects mentioned in text in List format.\n"
    "Input text: {question}\n"
    "Action: What objects are mentioned in original text? List separated by commas. For "
    "example, from \"person with white trousers on the left or right side of the person in "
    "blue\", output \"[\"person with white trousers\", \"person in blue\"]\".";

const std::string_view kEvidenceJudgment =
    "I will provide you an image and a **question**:\n"
    "{question}, please firstly determine whether the image contains the clues for answering "
    "the question or not (answer with **Yes** or **No**); then give the evidence of your "
    "decision.";

const std::string_view kViewCompleteness =
    "Question: Does the image fully contain every object in the list {target_list}? Please "
    "treat \"fully contain\" as entirely within the frame (not truncated by image boundaries). "
    "Please firstly answer the question with **Yes** or **No**; then give the evidence of your "
    "decision. For example, if yes, list the evidence of each object (e.g., object: bbox [x1, "
    "y1, x2, y2] or a clear region description); if no, list the missing objects by name.";

const std::string_view kReasoning = "Question: {question}\nAnswer with the option letter.";

std::string render(std::string_view tmpl, std::string_view slot, std::string_view value) {
    const std::string key = "{" + std::string(slot) + "}";
    std::string out;
    out.reserve(tmpl.size() + value.size());
    std::size_t pos = 0;
    while (true) {
        const auto hit = tmpl.find(key, pos);
        if (hit == std::string_view::npos) break;
        out.append(tmpl.substr(pos, hit - pos));
        out.append(value);
        pos = hit + key.size();
    }
    out.append(tmpl.substr(pos));
    return out;
}

std::string format_target_list(std::span<const std::string> targets) {
    std::string out = "[";
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (i) out += ", ";
        out += '\'';
        out += targets[i];
        out += '\'';
    }
    out += ']';
    return out;
}

std::string format_with_options(const Question& q) {
    std::string out = q.text;
    for (std::size_t i = 0; i < q.options.size(); ++i) {
        out += "\n(";
        out += static_cast<char>('A' + i);
        out += ") ";
        out += q.options[i];
    }
    return out;
}

std::string decomposition(const Question& q) {
    return render(kEvidenceDecomposition, "question", q.text);
}

std::string evidence_judgment(const Question& q) {
    return render(kEvidenceJudgment, "question", q.text);
}

std::string view_completeness(std::span<const std::string> targets) {
    return render(kViewCompleteness, "target_list", format_target_list(targets));
}

std::string reasoning(const Question& q) {
    return render(kReasoning, "question", format_with_options(q));
}

}  // namespace deepscan::prompts
