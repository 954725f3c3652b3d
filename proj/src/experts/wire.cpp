// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/experts/wire.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "deepscan/error.hpp"
#include "deepscan/imaging/png_io.hpp"

namespace deepscan::wire {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const char* endpoint) {
    if (!j.is_object() || !j.contains(key))
        throw ProtocolError(std::string(endpoint) + " response lacks '" + key + "'");
    return j.at(key);
}

int int_field(const json& j, const char* key, const char* endpoint) {
    const json& v = field(j, key, endpoint);
    if (!v.is_number_integer())
        throw ProtocolError(std::string(endpoint) + " response field '" + key + "' is not an integer");
    return v.get<int>();
}

void expect_dims(const json& j, int width, int height, const char* endpoint) {
    const int w = int_field(j, "width", endpoint);
    const int h = int_field(j, "height", endpoint);
    if (w != width || h != height)
        throw ProtocolError(std::string(endpoint) + " response is " + std::to_string(w) + "x" +
                            std::to_string(h) + ", expected " + std::to_string(width) + "x" +
                            std::to_string(height));
}

}  // namespace

std::string path_for(std::string_view endpoint) { return "/v1/" + std::string(endpoint); }

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw ProtocolError("base64 length is not a multiple of 4");
    for (char c : text) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/' || c == '=';
        if (!ok) throw ProtocolError("base64 payload has invalid characters");
    }
    std::vector<std::uint8_t> out(3 * (text.size() / 4));
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) throw ProtocolError("malformed base64 payload");
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::string encode_image(const RasterImage& img) { return base64_encode(encode_png(img)); }

RasterImage decode_image(std::string_view b64) {
    const auto bytes = base64_decode(b64);
    try {
        return decode_png(bytes);
    } catch (const std::exception& e) {
        throw ProtocolError(std::string("image payload is not a PNG: ") + e.what());
    }
}

std::vector<std::int64_t> rle_encode(const BitMask& mask) {
    std::vector<std::int64_t> runs;
    std::uint8_t current = 0;
    std::int64_t len = 0;
    for (std::uint8_t b : mask.bits()) {
        if ((b != 0) == (current != 0)) {
            ++len;
        } else {
            runs.push_back(len);
            current = b != 0;
            len = 1;
        }
    }
    runs.push_back(len);
    return runs;
}

BitMask rle_decode(int width, int height, std::span<const std::int64_t> runs) {
    if (width < 1 || height < 1) throw ProtocolError("mask dimensions must be positive");
    const std::int64_t total = static_cast<std::int64_t>(width) * height;
    std::int64_t sum = 0;
    for (std::int64_t r : runs) {
        if (r < 0) throw ProtocolError("negative RLE run");
        sum += r;
        if (sum > total) break;
    }
    if (sum != total)
        throw ProtocolError("RLE runs sum to " + std::to_string(sum) + ", expected " +
                            std::to_string(total));
    BitMask mask(width, height);
    auto bits = mask.bits();
    std::int64_t pos = 0;
    bool on = false;
    for (std::int64_t r : runs) {
        if (on) std::fill(bits.begin() + pos, bits.begin() + pos + r, std::uint8_t{1});
        pos += r;
        on = !on;
    }
    return mask;
}

Request search_request(const RasterImage& patch, const std::string& question) {
    return {std::string(kSearch), {&patch}, {{"question", question}}};
}

Request segment_request(const RasterImage& image, Point point) {
    return {std::string(kSegment), {&image}, {{"point", {{"x", point.x}, {"y", point.y}}}}};
}

Request detect_request(const RasterImage& view, const std::string& query) {
    return {std::string(kDetect), {&view}, {{"query", query}}};
}

Request complete_request(const CompletionRequest& req) {
    Request out{std::string(kComplete), {}, {}};
    for (const auto& img : req.images) out.images.push_back(img.pixels);
    out.params = {{"prompt", req.prompt},
                  {"system", req.system},
                  {"max_tokens", req.max_tokens},
                  {"temperature", req.temperature},
                  {"seed", req.seed}};
    return out;
}

json body_of(const Request& req) {
    json body = req.params;
    if (req.endpoint == kComplete) {
        json images = json::array();
        for (const auto* img : req.images) images.push_back(encode_image(*img));
        body["images"] = std::move(images);
    } else {
        if (req.images.size() != 1)
            throw InvalidInput(req.endpoint + " request needs exactly one image");
        body["image"] = encode_image(*req.images.front());
    }
    return body;
}

GrayMap parse_search_response(const json& j, int width, int height) {
    expect_dims(j, width, height, "search");
    const json& values = field(j, "values", "search");
    if (!values.is_array()) throw ProtocolError("search response 'values' is not an array");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw ProtocolError("search response has " + std::to_string(values.size()) +
                            " values, expected " + std::to_string(width * height));
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) {
        if (!v.is_number()) throw ProtocolError("search response value is not a number");
        const double d = v.get<double>();
        if (!std::isfinite(d) || d < 0.0)
            throw ProtocolError("search response values must be finite and non-negative");
        out.push_back(d);
    }
    return GrayMap(width, height, std::move(out));
}

BitMask parse_segment_response(const json& j, int width, int height) {
    expect_dims(j, width, height, "segment");
    const json& rle = field(j, "rle", "segment");
    if (!rle.is_array()) throw ProtocolError("segment response 'rle' is not an array");
    std::vector<std::int64_t> runs;
    runs.reserve(rle.size());
    for (const auto& r : rle) {
        if (!r.is_number_integer()) throw ProtocolError("segment RLE entry is not an integer");
        runs.push_back(r.get<std::int64_t>());
    }
    return rle_decode(width, height, runs);
}

std::vector<BBox> parse_detect_response(const json& j) {
    const json& boxes = field(j, "boxes", "detect");
    if (!boxes.is_array()) throw ProtocolError("detect response 'boxes' is not an array");
    std::vector<BBox> out;
    for (const auto& b : boxes) {
        BBox box{int_field(b, "x0", "detect"), int_field(b, "y0", "detect"),
                 int_field(b, "x1", "detect"), int_field(b, "y1", "detect")};
        if (box.x1 <= box.x0 || box.y1 <= box.y0)
            throw ProtocolError("detect response contains a degenerate box");
        out.push_back(box);
    }
    return out;
}

std::string parse_complete_response(const json& j) {
    const json& text = field(j, "text", "complete");
    if (!text.is_string()) throw ProtocolError("complete response 'text' is not a string");
    return text.get<std::string>();
}

json search_response(const GrayMap& map) {
    return {{"width", map.width()},
            {"height", map.height()},
            {"values", std::vector<double>(map.values().begin(), map.values().end())}};
}

json segment_response(const BitMask& mask) {
    return {{"width", mask.width()}, {"height", mask.height()}, {"rle", rle_encode(mask)}};
}

json detect_response(std::span<const BBox> boxes) {
    json arr = json::array();
    for (const auto& b : boxes) arr.push_back({{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}});
    return {{"boxes", std::move(arr)}};
}

json complete_response(const std::string& text) { return {{"text", text}}; }

json error_response(const std::string& message) { return {{"error", message}}; }

WireExperts::WireExperts(std::shared_ptr<const Transport> transport)
    : transport_(std::move(transport)) {
    if (!transport_) throw InvalidInput("wire experts need a transport");
}

GrayMap WireExperts::search(const FramedImage& patch, const Question& q) const {
    const auto& img = *patch.pixels;
    return parse_search_response(transport_->call(search_request(img, q.text)), img.width(),
                                 img.height());
}

BitMask WireExperts::segment(const FramedImage& image, Point point) const {
    const auto& img = *image.pixels;
    return parse_segment_response(transport_->call(segment_request(img, point)), img.width(),
                                  img.height());
}

std::vector<BBox> WireExperts::detect(const FramedImage& view, const Question& q) const {
    return parse_detect_response(transport_->call(detect_request(*view.pixels, q.text)));
}

std::string WireExperts::complete(const CompletionRequest& request) const {
    return parse_complete_response(transport_->call(complete_request(request)));
}

ExpertBundle WireExperts::bundle(std::shared_ptr<const Transport> transport) {
    auto experts = std::make_shared<const WireExperts>(std::move(transport));
    return {experts, experts, experts};
}

}  // namespace deepscan::wire
