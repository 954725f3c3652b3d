// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

using Setter = std::function<void(const nlohmann::json&)>;

void apply_section(const nlohmann::json& j, const std::string& section, const std::map<std::string, Setter>& setters) {
    if (!j.is_object()) throw InvalidInput("config section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw InvalidInput("unknown config key '" + section + "." + key + "'");
        try {
            it->second(value);
        } catch (const nlohmann::json::exception&) {
            throw InvalidInput("config key '" + section + "." + key + "' has the wrong type");
        }
    }
}

template <class T>
Setter set(T& field) {
    return [&field](const nlohmann::json& v) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw nlohmann::json::type_error::create(302, "expected boolean", &v);
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw nlohmann::json::type_error::create(302, "expected integer", &v);
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw nlohmann::json::type_error::create(302, "expected number", &v);
        }
        field = v.get<T>();
    };
}

}  // namespace

nlohmann::json AppConfig::to_json() const {
    const auto& s = pipeline.scan;
    const auto& r = pipeline.refocus;
    const auto& g = pipeline.gen;
    nlohmann::json j;
    j["scan"] = {{"tau_area", s.tau_area},
                 {"theta_iou", s.theta_iou},
                 {"k", s.k ? nlohmann::json(*s.k) : nlohmann::json(nullptr)},
                 {"patch_single", s.patch_single},
                 {"patch_multi", s.patch_multi},
                 {"close_kernel", s.close_kernel},
                 {"dilate_radius", s.dilate_radius},
                 {"min_tile", s.min_tile},
                 {"proxy_rule", to_string(s.proxy_rule)},
                 {"one_shot", s.one_shot},
                 {"workers", s.workers}};
    j["refocus"] = {{"scale_s", r.scale_s}, {"detect_pad", r.detect_pad}, {"workers", r.workers}};
    j["generation"] = {{"temperature", g.temperature},
                       {"seed", g.seed},
                       {"short_max_tokens", g.short_max_tokens},
                       {"reasoning_max_tokens", g.reasoning_max_tokens}};
    j["experts"] = experts ? nlohmann::json(*experts) : nlohmann::json(nullptr);
    j["remote_timeout_s"] = remote_timeout_s;
    return j;
}

AppConfig apply_config(AppConfig cfg, const nlohmann::json& j) {
    auto& s = cfg.pipeline.scan;
    auto& r = cfg.pipeline.refocus;
    auto& g = cfg.pipeline.gen;
    const std::map<std::string, Setter> scan{
        {"tau_area", set(s.tau_area)},
        {"theta_iou", set(s.theta_iou)},
        {"k",
         [&s](const nlohmann::json& v) {
             if (v.is_null()) s.k.reset();
             else if (v.is_number_integer()) s.k = v.get<int>();
             else throw nlohmann::json::type_error::create(302, "expected integer or null", &v);
         }},
        {"patch_single", set(s.patch_single)},
        {"patch_multi", set(s.patch_multi)},
        {"close_kernel", set(s.close_kernel)},
        {"dilate_radius", set(s.dilate_radius)},
        {"min_tile", set(s.min_tile)},
        {"proxy_rule", [&s](const nlohmann::json& v) { s.proxy_rule = proxy_rule_from_string(v.get<std::string>()); }},
        {"one_shot", set(s.one_shot)},
        {"workers", set(s.workers)},
    };
    const std::map<std::string, Setter> refocus{
        {"scale_s", set(r.scale_s)}, {"detect_pad", set(r.detect_pad)}, {"workers", set(r.workers)}};
    const std::map<std::string, Setter> generation{{"temperature", set(g.temperature)},
                                                   {"seed", set(g.seed)},
                                                   {"short_max_tokens", set(g.short_max_tokens)},
                                                   {"reasoning_max_tokens", set(g.reasoning_max_tokens)}};
    const std::map<std::string, Setter> top{
        {"scan", [&](const nlohmann::json& v) { apply_section(v, "scan", scan); }},
        {"refocus", [&](const nlohmann::json& v) { apply_section(v, "refocus", refocus); }},
        {"generation", [&](const nlohmann::json& v) { apply_section(v, "generation", generation); }},
        {"experts",
         [&cfg](const nlohmann::json& v) {
             if (v.is_null()) cfg.experts.reset();
             else cfg.experts = v.get<std::string>();
         }},
        {"remote_timeout_s", set(cfg.remote_timeout_s)},
    };
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const auto it = top.find(key);
        if (it == top.end()) throw InvalidInput("unknown config key '" + key + "'");
        try {
            it->second(value);
        } catch (const nlohmann::json::exception&) {
            throw InvalidInput("config key '" + key + "' has the wrong type");
        }
    }
    cfg.pipeline.validate();
    if (!(cfg.remote_timeout_s > 0)) throw InvalidInput("remote_timeout_s must be > 0");
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("config is not valid JSON: " + path.string());
    return apply_config(AppConfig{}, j);
}

}  // namespace deepscan
