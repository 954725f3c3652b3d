// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/parsing.hpp"

#include <cctype>

namespace deepscan {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string_view trim_item(std::string_view s) {
    auto junk = [](char c) { return is_space(c) || c == '"' || c == '\'' || c == '`'; };
    while (!s.empty() && junk(s.front())) s.remove_prefix(1);
    while (!s.empty() && junk(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<std::vector<std::string>> parse_object_list(std::string_view text) {
    const auto open = text.find('[');
    const auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close <= open)
        return std::nullopt;
    std::string_view body = text.substr(open + 1, close - open - 1);
    std::vector<std::string> items;
    while (true) {
        const auto comma = body.find(',');
        auto item = trim_item(body.substr(0, comma));
        if (!item.empty()) items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    if (items.empty()) return std::nullopt;
    return items;
}

JudgeVerdict parse_verdict(std::string_view text) {
    JudgeVerdict v;
    v.rationale = std::string(text);
    std::size_t i = 0;
    for (int tok = 0; tok < kVerdictTokenWindow; ++tok) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i == text.size()) break;
        std::string word;
        while (i < text.size() && !is_space(text[i])) {
            if (is_alpha(text[i]))
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
            ++i;
        }
        if (word == "yes") {
            v.affirmed = true;
            return v;
        }
        if (word == "no") return v;
    }
    v.malformed = true;
    return v;
}

std::optional<char> extract_option_letter(std::string_view text, int n_options) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        if (c < 'A' || c >= 'A' + n_options) continue;
        const bool left_ok = i == 0 || !is_alnum(text[i - 1]);
        const bool right_ok = i + 1 == text.size() || !is_alnum(text[i + 1]);
        if (left_ok && right_ok) return c;
    }
    return std::nullopt;
}

}  // namespace deepscan
