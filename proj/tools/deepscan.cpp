// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "deepscan/error.hpp"
#include "deepscan/harness/backends.hpp"
#include "deepscan/harness/bench.hpp"
#include "deepscan/harness/config.hpp"
#include "deepscan/harness/evaluate.hpp"
#include "deepscan/harness/overlay.hpp"
#include "deepscan/harness/serve_check.hpp"
#include "deepscan/harness/suite.hpp"
#include "deepscan/imaging/png_io.hpp"

namespace fs = std::filesystem;
using namespace deepscan;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::vector<std::string> overrides;  // dotted.key=value
    std::string experts;
    std::string record;
    std::string log_level = "warn";
};

// "scan.k=1" -> {"scan": {"k": 1}}. Values that are not JSON are strings.
nlohmann::json override_patch(const std::vector<std::string>& overrides) {
    nlohmann::json patch = nlohmann::json::object();
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + o + "'");
        const std::string key = o.substr(0, eq);
        const std::string raw = o.substr(eq + 1);
        auto value = nlohmann::json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        std::string pointer = "/" + key;
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        patch[nlohmann::json::json_pointer(pointer)] = value;
    }
    return patch;
}

AppConfig resolve_config(const Common& c) {
    try {
        AppConfig cfg = c.config.empty() ? AppConfig{} : load_config(c.config);
        cfg = apply_config(cfg, override_patch(c.overrides));
        if (!c.experts.empty()) cfg.experts = c.experts;
        if (!cfg.experts) throw UsageError("no experts given; pass --experts or set 'experts' in the config");
        ExpertSpec::parse(*cfg.experts);
        return cfg;
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
}

std::unique_ptr<ExpertProvider> provider_for(const AppConfig& cfg, const Common& c) {
    ProviderOptions opts;
    opts.remote_timeout_s = cfg.remote_timeout_s;
    if (!c.record.empty()) opts.record_dir = c.record;
    return make_provider(ExpertSpec::parse(*cfg.experts), opts);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write " + path.string());
    }
    fs::rename(tmp, path);
}

void add_common(CLI::App* cmd, Common& c, bool needs_experts) {
    cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", c.overrides, "Config override, e.g. scan.k=1 (repeatable)");
    if (needs_experts) {
        cmd->add_option("--experts", c.experts, "oracle:<specdir> | remote:<url> | replay:<fixdir>");
        cmd->add_option("--record", c.record, "Write replay fixtures for every expert call to this directory");
    }
}

int cmd_run(const Common& c, const std::string& image_path, const std::string& question,
            const std::vector<std::string>& options, const std::string& overlay, const std::string& trace_out) {
    const AppConfig cfg = resolve_config(c);
    const auto provider = provider_for(cfg, c);
    const RasterImage image = read_png(image_path);
    Question q{question, options, std::nullopt};
    const RunResult res = run_pipeline(image, q, provider->for_image(image_path), cfg.pipeline);

    fs::path trace_path = trace_out;
    if (trace_path.empty()) trace_path = fs::path(image_path).replace_extension(".trace.json");
    write_json(trace_path, res.trace.to_json());
    if (!overlay.empty()) write_png(overlay, draw_overlay(image, res));

    if (!res.ok()) {
        std::cerr << "error: " << *res.trace.error_kind << ": " << res.trace.error_message.value_or("") << '\n';
        return kRuntimeFailure;
    }
    std::cout << res.answer << '\n';
    return 0;
}

int cmd_eval(const Common& c, const std::string& bench, const std::string& mode, int jobs,
             const std::string& trace_dir, bool resume, bool with_timing, const std::string& out) {
    const AppConfig cfg = resolve_config(c);
    const auto provider = provider_for(cfg, c);
    const auto items = load_bench(bench);
    EvalOptions opts;
    opts.mode = eval_mode_from_string(mode);
    opts.jobs = jobs;
    if (!trace_dir.empty()) opts.trace_dir = trace_dir;
    opts.resume = resume;
    opts.with_timing = with_timing;
    if (opts.resume && !opts.trace_dir) throw UsageError("--resume needs --trace-dir");
    const EvalReport report = evaluate(items, make_pipeline_runner(*provider, cfg.pipeline), opts);
    if (out.empty()) {
        std::cout << report.to_json().dump(2) << '\n';
    } else {
        write_json(out, report.to_json());
    }
    return 0;
}

int cmd_synth(std::uint64_t seed, int count, const std::string& out, const std::string& kind, bool decoy,
              double area_ratio) {
    SuiteParams p;
    p.decoy = decoy;
    p.scene.kind = kind == "spatial" ? synth::QuestionKind::Spatial : synth::QuestionKind::Attribute;
    p.scene.target_area_ratio = area_ratio;
    p.scene.validate();
    const auto items = write_suite(out, seed, count, p);
    std::cout << items.size() << " scenes written to " << out << '\n';
    return 0;
}

int cmd_serve_check(const std::string& url, double timeout_s) {
    const ServeCheckReport report = serve_check(url, timeout_s);
    std::cout << report.to_json().dump(2) << '\n';
    return report.passed() ? 0 : kRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deepscan: training-free visual grounding and reasoning"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--log-level", common.log_level, "trace|debug|info|warn|error|off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    std::string image, question, overlay, trace_out;
    std::vector<std::string> options;
    auto* run = app.add_subcommand("run", "Answer one question about one image");
    add_common(run, common, true);
    run->add_option("--image", image, "Input PNG")->required()->check(CLI::ExistingFile);
    run->add_option("--question", question, "Question text")->required();
    run->add_option("--options", options, "Answer options, in order (A, B, ...)");
    run->add_option("--overlay", overlay, "Write a PNG with evidence and view boxes");
    run->add_option("--trace", trace_out, "Trace JSON path (default: beside the image)");

    std::string bench, mode = "plain", trace_dir, report_out;
    int jobs = 1;
    bool resume = false, with_timing = false;
    auto* ev = app.add_subcommand("eval", "Evaluate a benchmark file");
    add_common(ev, common, true);
    ev->add_option("--bench", bench, "Benchmark JSONL")->required()->check(CLI::ExistingFile);
    ev->add_option("--mode", mode, "plain | cyclic")->check(CLI::IsMember({"plain", "cyclic"}));
    ev->add_option("--jobs", jobs, "Items evaluated concurrently")->check(CLI::PositiveNumber);
    ev->add_option("--trace-dir", trace_dir, "Write one trace per item run");
    ev->add_flag("--resume", resume, "Reuse traces already in --trace-dir");
    ev->add_flag("--with-timing", with_timing, "Include wall time in the report");
    ev->add_option("--out", report_out, "Report path (default: stdout)");

    std::uint64_t seed = 0;
    int count = 1;
    std::string synth_out, kind = "attribute";
    bool decoy = false;
    double area_ratio = synth::SceneParams{}.target_area_ratio;
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic scenes");
    synth_cmd->require_subcommand(1);
    auto* gen = synth_cmd->add_subcommand("generate", "Write PNG + spec JSON per scene and bench.jsonl");
    gen->add_option("--seed", seed, "First scene seed")->required();
    gen->add_option("--count", count, "Number of scenes")->check(CLI::NonNegativeNumber);
    gen->add_option("--out", synth_out, "Output directory")->required();
    gen->add_option("--kind", kind, "attribute | spatial")->check(CLI::IsMember({"attribute", "spatial"}));
    gen->add_flag("--decoy", decoy, "Scenes with a high-attention decoy beside the target");
    gen->add_option("--area-ratio", area_ratio, "Target area / image area")->check(CLI::Range(1e-6, 0.5));

    std::string url;
    double timeout_s = 30.0;
    auto* sc = app.add_subcommand("serve-check", "Probe an adapter endpoint for wire-protocol conformance");
    sc->add_option("url", url, "http://host:port")->required();
    sc->add_option("--timeout", timeout_s, "Per-request timeout in seconds")->check(CLI::PositiveNumber);

    if (argc <= 1) {
        std::cerr << app.help();
        return kUsageError;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }
    spdlog::set_level(spdlog::level::from_str(common.log_level));

    try {
        if (*run) return cmd_run(common, image, question, options, overlay, trace_out);
        if (*ev) return cmd_eval(common, bench, mode, jobs, trace_dir, resume, with_timing, report_out);
        if (*gen) return cmd_synth(seed, count, synth_out, kind, decoy, area_ratio);
        if (*sc) return cmd_serve_check(url, timeout_s);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsageError;
}
