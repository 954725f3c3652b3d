// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/backends.hpp"

#include <cstdlib>

#include "deepscan/error.hpp"
#include "deepscan/experts/remote.hpp"
#include "deepscan/experts/replay.hpp"
#include "deepscan/synth/oracle.hpp"

namespace deepscan {
namespace {

class SharedProvider final : public ExpertProvider {
public:
    explicit SharedProvider(ExpertBundle b) : bundle_(std::move(b)) {}
    ExpertBundle for_image(const std::filesystem::path&) const override { return bundle_; }

private:
    ExpertBundle bundle_;
};

class OracleProvider final : public ExpertProvider {
public:
    OracleProvider(std::string location, std::optional<std::filesystem::path> record)
        : location_(std::move(location)), record_(std::move(record)) {}

    ExpertBundle for_image(const std::filesystem::path& image) const override {
        auto bundle = synth::make_oracle_experts(synth::read_scene_spec(resolve_scene_spec(location_, image)));
        return record_ ? RecordingExperts::bundle(std::move(bundle), *record_) : bundle;
    }

private:
    std::string location_;
    std::optional<std::filesystem::path> record_;
};

}  // namespace

ExpertSpec ExpertSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string scheme = text.substr(0, colon);
    ExpertSpec spec;
    spec.location = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (scheme == "oracle") {
        spec.kind = Kind::Oracle;
    } else if (scheme == "remote") {
        spec.kind = Kind::Remote;
        if (spec.location.empty())
            if (const char* env = std::getenv(kRemoteUrlEnv)) spec.location = env;
    } else if (scheme == "replay") {
        spec.kind = Kind::Replay;
    } else {
        throw InvalidInput("experts must be oracle:<specdir>, remote:<url> or replay:<fixdir>, got '" + text + "'");
    }
    if (spec.location.empty()) throw InvalidInput("experts '" + text + "' has no location");
    return spec;
}

std::string ExpertSpec::str() const {
    switch (kind) {
        case Kind::Oracle: return "oracle:" + location;
        case Kind::Remote: return "remote:" + location;
        case Kind::Replay: return "replay:" + location;
    }
    return location;
}

std::filesystem::path resolve_scene_spec(const std::string& location, const std::filesystem::path& image) {
    const std::filesystem::path loc(location);
    if (loc.extension() == ".json" && std::filesystem::is_regular_file(loc)) return loc;
    std::filesystem::path with_ext = loc;
    with_ext += ".json";
    if (std::filesystem::is_regular_file(with_ext)) return with_ext;
    if (std::filesystem::is_directory(loc)) {
        auto by_stem = loc / (image.stem().string() + ".json");
        if (std::filesystem::is_regular_file(by_stem)) return by_stem;
        throw InvalidInput("no scene spec for " + image.filename().string() + " in " + location);
    }
    throw InvalidInput("oracle scene spec not found: " + location);
}

std::unique_ptr<ExpertProvider> make_provider(const ExpertSpec& spec, const ProviderOptions& opts) {
    switch (spec.kind) {
        case ExpertSpec::Kind::Oracle:
            return std::make_unique<OracleProvider>(spec.location, opts.record_dir);
        case ExpertSpec::Kind::Remote: {
            auto bundle = make_remote_experts(spec.location, opts.remote_timeout_s);
            if (opts.record_dir) bundle = RecordingExperts::bundle(std::move(bundle), *opts.record_dir);
            return std::make_unique<SharedProvider>(std::move(bundle));
        }
        case ExpertSpec::Kind::Replay:
            return std::make_unique<SharedProvider>(make_replay_experts(spec.location));
    }
    throw InvalidInput("unknown expert kind");
}

}  // namespace deepscan
