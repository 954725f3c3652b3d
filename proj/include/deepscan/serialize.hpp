// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "deepscan/error.hpp"
#include "deepscan/imaging/raster.hpp"

namespace deepscan {

inline nlohmann::json bbox_json(const BBox& b) { return nlohmann::json::array({b.x0, b.y0, b.x1, b.y1}); }

/// Accepts [x0, y0, x1, y1]. Throws InvalidInput on any other shape.
inline BBox bbox_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw InvalidInput("bbox must be [x0, y0, x1, y1]");
    for (const auto& v : j)
        if (!v.is_number_integer()) throw InvalidInput("bbox coordinates must be integers");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

inline nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace deepscan
