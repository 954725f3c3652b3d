// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "deepscan/experts/types.hpp"

namespace deepscan::wire {

// JSON-over-HTTP protocol shared with adapter servers:
//   POST /v1/search   {image, question}                                -> {width, height, values}
//   POST /v1/segment  {image, point: {x, y}}                           -> {width, height, rle}
//   POST /v1/detect   {image, query}                                   -> {boxes: [{x0,y0,x1,y1}]}
//   POST /v1/complete {images, prompt, system, max_tokens, temperature, seed} -> {text}
// Images travel as base64 PNG. Errors come back as 4xx with {error}.

inline constexpr std::string_view kSearch = "search";
inline constexpr std::string_view kSegment = "segment";
inline constexpr std::string_view kDetect = "detect";
inline constexpr std::string_view kComplete = "complete";

std::string path_for(std::string_view endpoint);

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string encode_image(const RasterImage& img);
/// Throws ProtocolError when the payload is not base64 PNG.
RasterImage decode_image(std::string_view b64);

/// Alternating run lengths in row-major order, starting with a (possibly
/// zero-length) run of unset pixels.
std::vector<std::int64_t> rle_encode(const BitMask& mask);
/// Throws ProtocolError on negative runs or when the runs do not sum to
/// width * height.
BitMask rle_decode(int width, int height, std::span<const std::int64_t> runs);

/// A request before image encoding: the images plus every scalar field.
struct Request {
    std::string endpoint;
    std::vector<const RasterImage*> images;
    nlohmann::json params = nlohmann::json::object();
};

Request search_request(const RasterImage& patch, const std::string& question);
Request segment_request(const RasterImage& image, Point point);
Request detect_request(const RasterImage& view, const std::string& query);
Request complete_request(const CompletionRequest& req);

/// Full HTTP body: params plus "image" (or "images" for complete).
nlohmann::json body_of(const Request& req);

// Response decoders validate the schema and throw ProtocolError.
GrayMap parse_search_response(const nlohmann::json& j, int width, int height);
BitMask parse_segment_response(const nlohmann::json& j, int width, int height);
std::vector<BBox> parse_detect_response(const nlohmann::json& j);
std::string parse_complete_response(const nlohmann::json& j);

// Server-side encoders.
nlohmann::json search_response(const GrayMap& map);
nlohmann::json segment_response(const BitMask& mask);
nlohmann::json detect_response(std::span<const BBox> boxes);
nlohmann::json complete_response(const std::string& text);
nlohmann::json error_response(const std::string& message);

/// Sends a prepared request somewhere and returns the decoded JSON answer.
class Transport {
public:
    virtual ~Transport() = default;
    virtual nlohmann::json call(const Request& req) const = 0;
};

/// Expert bundle that speaks the wire protocol through a Transport.
class WireExperts final : public SearchExpert, public VisualExpert, public LvlmClient {
public:
    explicit WireExperts(std::shared_ptr<const Transport> transport);

    GrayMap search(const FramedImage& patch, const Question& q) const override;
    BitMask segment(const FramedImage& image, Point point) const override;
    std::vector<BBox> detect(const FramedImage& view, const Question& q) const override;
    std::string complete(const CompletionRequest& request) const override;

    static ExpertBundle bundle(std::shared_ptr<const Transport> transport);

private:
    std::shared_ptr<const Transport> transport_;
};

}  // namespace deepscan::wire
