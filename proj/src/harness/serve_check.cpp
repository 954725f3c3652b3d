// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/serve_check.hpp"

#include <cmath>
#include <functional>

#include "deepscan/error.hpp"
#include "deepscan/experts/remote.hpp"
#include "deepscan/experts/wire.hpp"

namespace deepscan {
namespace {

constexpr int kProbeSide = 64;

// Gradient background with a bright square in the middle.
RasterImage probe_image() {
    RasterImage img(kProbeSide, kProbeSide);
    for (int y = 0; y < kProbeSide; ++y)
        for (int x = 0; x < kProbeSide; ++x) {
            std::uint8_t* px = img.pixel(x, y);
            const bool inside = x >= 24 && x < 40 && y >= 24 && y < 40;
            px[0] = inside ? 230 : static_cast<std::uint8_t>(2 * x);
            px[1] = inside ? 40 : static_cast<std::uint8_t>(2 * y);
            px[2] = inside ? 40 : 90;
        }
    return img;
}

nlohmann::json parse_ok(const std::pair<int, std::string>& res, const std::string& path) {
    if (res.first != 200) throw std::runtime_error(path + " returned HTTP " + std::to_string(res.first));
    auto j = nlohmann::json::parse(res.second, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw std::runtime_error(path + " did not return a JSON object");
    return j;
}

void expect(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

}  // namespace

bool ServeCheckReport::passed() const noexcept {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

nlohmann::json ServeCheckReport::to_json() const {
    nlohmann::json j = {{"url", url}, {"passed", passed()}, {"checks", nlohmann::json::array()}};
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return j;
}

ServeCheckReport serve_check(const std::string& url, double timeout_s) {
    const HttpTransport http(RemoteEndpoint::parse(url), timeout_s);
    ServeCheckReport report;
    report.url = http.endpoint().url();
    const RasterImage img = probe_image();
    const std::string b64 = wire::encode_image(img);

    auto run = [&](const std::string& name, const std::function<std::string()>& fn) {
        CheckResult r{name, false, ""};
        try {
            r.detail = fn();
            r.passed = true;
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        report.checks.push_back(std::move(r));
    };
    auto post = [&](std::string_view endpoint, const nlohmann::json& body) {
        const std::string path = wire::path_for(endpoint);
        return parse_ok(http.post_raw(path, body.dump()), path);
    };

    run("health", [&] {
        const auto res = http.get_raw("/v1/health");
        expect(res.first == 200, "GET /v1/health returned HTTP " + std::to_string(res.first));
        return std::string("ok");
    });
    run("search.schema", [&] {
        const auto j = post(wire::kSearch, {{"image", b64}, {"question", "What color is the red square?"}});
        const GrayMap map = wire::parse_search_response(j, kProbeSide, kProbeSide);
        return "values=" + std::to_string(map.size());
    });
    run("segment.rle", [&] {
        const auto j = post(wire::kSegment, {{"image", b64}, {"point", {{"x", 32}, {"y", 32}}}});
        const BitMask m = wire::parse_segment_response(j, kProbeSide, kProbeSide);
        return "runs sum to " + std::to_string(kProbeSide * kProbeSide) + ", set=" + std::to_string(m.count());
    });
    run("detect.schema", [&] {
        const auto j = post(wire::kDetect, {{"image", b64}, {"query", "red square"}});
        const auto boxes = wire::parse_detect_response(j);
        for (const auto& b : boxes)
            expect(b.valid() && img.bounds().contains(b), "detect box outside the image");
        return "boxes=" + std::to_string(boxes.size());
    });
    run("complete.schema", [&] {
        const auto j = post(wire::kComplete, {{"images", {b64}},
                                              {"prompt", "Is there a red square? Answer Yes or No."},
                                              {"system", "You are a test probe."},
                                              {"max_tokens", 16},
                                              {"temperature", 0.0},
                                              {"seed", 13}});
        return "text length " + std::to_string(wire::parse_complete_response(j).size());
    });

    const std::pair<std::string, std::string> malformed[] = {{"not-json", "{\"image\": "},
                                                             {"empty-object", "{}"},
                                                             {"bad-image", "{\"image\": \"@@@\", \"question\": \"q\", "
                                                                           "\"query\": \"q\", \"point\": {\"x\": 0, \"y\": 0}, "
                                                                           "\"images\": [\"@@@\"], \"prompt\": \"p\"}"}};
    for (const auto endpoint : {wire::kSearch, wire::kSegment, wire::kDetect, wire::kComplete}) {
        for (const auto& [label, body] : malformed) {
            run(std::string(endpoint) + ".error." + label, [&, endpoint = endpoint] {
                const std::string path = wire::path_for(endpoint);
                const auto res = http.post_raw(path, body);
                expect(res.first >= 400 && res.first < 500, path + " answered HTTP " + std::to_string(res.first) +
                                                                " to a malformed body");
                const auto j = nlohmann::json::parse(res.second, nullptr, false);
                expect(j.is_object() && j.contains("error") && j["error"].is_string(),
                       "error body lacks a string 'error' field");
                return "HTTP " + std::to_string(res.first);
            });
        }
    }
    return report;
}

}  // namespace deepscan
