// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "deepscan/experts/types.hpp"

namespace deepscan {

inline constexpr const char* kRemoteUrlEnv = "DEEPSCAN_REMOTE_URL";

/// Parsed form of `oracle:<specdir>`, `remote:<url>` or `replay:<fixdir>`.
struct ExpertSpec {
    enum class Kind { Oracle, Remote, Replay };
    Kind kind = Kind::Oracle;
    std::string location;

    /// Throws InvalidInput on an unknown scheme or an empty location.
    /// `remote:` with no url falls back to the DEEPSCAN_REMOTE_URL variable.
    static ExpertSpec parse(const std::string& text);
    std::string str() const;
};

/// Hands out the expert bundle to use for one image.
class ExpertProvider {
public:
    virtual ~ExpertProvider() = default;
    virtual ExpertBundle for_image(const std::filesystem::path& image) const = 0;
};

struct ProviderOptions {
    double remote_timeout_s = 120.0;
    std::optional<std::filesystem::path> record_dir;  // capture replay fixtures
};

/// Oracle providers resolve the scene spec as: the location itself when it
/// is a .json file, <location>.json when that exists, otherwise
/// <location>/<image stem>.json.
std::unique_ptr<ExpertProvider> make_provider(const ExpertSpec& spec, const ProviderOptions& opts = {});

std::filesystem::path resolve_scene_spec(const std::string& location, const std::filesystem::path& image);

}  // namespace deepscan
