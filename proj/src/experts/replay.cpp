// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/replay.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deepscan/error.hpp"

namespace deepscan {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
}

void fnv_int(std::uint64_t& h, std::int64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    fnv(h, b, sizeof b);
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const nlohmann::json& require(const nlohmann::json& body, const char* key, std::string_view endpoint) {
    if (!body.is_object() || !body.contains(key))
        throw InvalidInput(std::string(endpoint) + " request lacks '" + key + "'");
    return body.at(key);
}

std::string require_string(const nlohmann::json& body, const char* key, std::string_view endpoint) {
    const auto& v = require(body, key, endpoint);
    if (!v.is_string()) throw InvalidInput(std::string(endpoint) + " field '" + key + "' must be a string");
    return v.get<std::string>();
}

RasterImage require_image(const nlohmann::json& v, std::string_view endpoint) {
    if (!v.is_string()) throw InvalidInput(std::string(endpoint) + " image must be a base64 string");
    try {
        return wire::decode_image(v.get<std::string>());
    } catch (const ProtocolError& e) {
        throw InvalidInput(e.what());
    }
}

}  // namespace

std::uint64_t fixture_key(const wire::Request& req) {
    std::uint64_t h = kFnvOffset;
    fnv(h, req.endpoint.data(), req.endpoint.size());
    const std::string params = req.params.dump();
    fnv_int(h, static_cast<std::int64_t>(params.size()));
    fnv(h, params.data(), params.size());
    fnv_int(h, static_cast<std::int64_t>(req.images.size()));
    for (const auto* img : req.images) {
        fnv_int(h, img->width());
        fnv_int(h, img->height());
        fnv(h, img->data().data(), img->data().size());
    }
    return h;
}

std::filesystem::path fixture_path(const std::filesystem::path& dir, const wire::Request& req) {
    return dir / (req.endpoint + "-" + hex16(fixture_key(req)) + ".json");
}

ReplayTransport::ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_))
        throw InvalidInput("replay fixture directory does not exist: " + dir_.string());
}

nlohmann::json ReplayTransport::call(const wire::Request& req) const {
    const auto path = fixture_path(dir_, req);
    std::ifstream in(path);
    if (!in) throw FixtureMissing("no fixture for " + req.endpoint + " request: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("response"))
        throw ProtocolError("corrupt fixture " + path.string());
    return doc.at("response");
}

RecordingExperts::RecordingExperts(ExpertBundle inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
    inner_.validate();
    std::filesystem::create_directories(dir_);
}

void RecordingExperts::store(const wire::Request& req, const nlohmann::json& response) const {
    static std::atomic<unsigned long long> serial{0};
    const auto final_path = fixture_path(dir_, req);
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(serial.fetch_add(1));
    {
        std::ofstream out(tmp);
        nlohmann::json doc = {{"endpoint", req.endpoint}, {"request", req.params}, {"response", response}};
        out << doc.dump(1) << '\n';
        if (!out) throw std::runtime_error("cannot write fixture " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
}

GrayMap RecordingExperts::search(const FramedImage& patch, const Question& q) const {
    GrayMap out = inner_.search->search(patch, q);
    store(wire::search_request(*patch.pixels, q.text), wire::search_response(out));
    return out;
}

BitMask RecordingExperts::segment(const FramedImage& image, Point point) const {
    BitMask out = inner_.visual->segment(image, point);
    store(wire::segment_request(*image.pixels, point), wire::segment_response(out));
    return out;
}

std::vector<BBox> RecordingExperts::detect(const FramedImage& view, const Question& q) const {
    auto out = inner_.visual->detect(view, q);
    store(wire::detect_request(*view.pixels, q.text), wire::detect_response(out));
    return out;
}

std::string RecordingExperts::complete(const CompletionRequest& request) const {
    std::string out = inner_.lvlm->complete(request);
    store(wire::complete_request(request), wire::complete_response(out));
    return out;
}

ExpertBundle RecordingExperts::bundle(ExpertBundle inner, std::filesystem::path dir) {
    auto rec = std::make_shared<const RecordingExperts>(std::move(inner), std::move(dir));
    return {rec, rec, rec};
}

nlohmann::json serve_request(const ExpertBundle& experts, std::string_view endpoint,
                             const nlohmann::json& body) {
    if (!body.is_object()) throw InvalidInput("request body must be a JSON object");
    if (endpoint == wire::kSearch) {
        const RasterImage img = require_image(require(body, "image", endpoint), endpoint);
        Question q{require_string(body, "question", endpoint), {}, {}};
        return wire::search_response(experts.search->search(FramedImage::whole(img), q));
    }
    if (endpoint == wire::kSegment) {
        const RasterImage img = require_image(require(body, "image", endpoint), endpoint);
        const auto& pt = require(body, "point", endpoint);
        if (!pt.is_object() || !pt.contains("x") || !pt.contains("y") ||
            !pt["x"].is_number_integer() || !pt["y"].is_number_integer())
            throw InvalidInput("segment point must be {x: int, y: int}");
        const Point p{pt["x"].get<int>(), pt["y"].get<int>()};
        if (!img.bounds().contains(p)) throw InvalidInput("segment point outside image");
        return wire::segment_response(experts.visual->segment(FramedImage::whole(img), p));
    }
    if (endpoint == wire::kDetect) {
        const RasterImage img = require_image(require(body, "image", endpoint), endpoint);
        Question q{require_string(body, "query", endpoint), {}, {}};
        return wire::detect_response(experts.visual->detect(FramedImage::whole(img), q));
    }
    if (endpoint == wire::kComplete) {
        const auto& imgs = require(body, "images", endpoint);
        if (!imgs.is_array()) throw InvalidInput("complete images must be an array");
        std::vector<RasterImage> decoded;
        for (const auto& v : imgs) decoded.push_back(require_image(v, endpoint));
        CompletionRequest req;
        for (const auto& img : decoded) req.images.push_back(FramedImage::whole(img));
        req.prompt = require_string(body, "prompt", endpoint);
        req.system = body.value("system", std::string());
        req.max_tokens = body.value("max_tokens", 50);
        req.temperature = body.value("temperature", 0.0);
        req.seed = body.value("seed", 13);
        return wire::complete_response(experts.lvlm->complete(req));
    }
    throw InvalidInput("unknown endpoint: " + std::string(endpoint));
}

ExpertBundle make_replay_experts(const std::filesystem::path& dir) {
    return wire::WireExperts::bundle(std::make_shared<ReplayTransport>(dir));
}

}  // namespace deepscan
