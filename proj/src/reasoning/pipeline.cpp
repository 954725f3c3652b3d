// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/reasoning/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <chrono>

#include "deepscan/error.hpp"
#include "deepscan/experts/operations.hpp"
#include "deepscan/experts/parsing.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

void PipelineConfig::validate() const {
    scan.validate();
    refocus.validate();
    if (gen.short_max_tokens < 1 || gen.reasoning_max_tokens < 1)
        throw InvalidInput("max token limits must be >= 1");
}

nlohmann::json MemoryProvenance::to_json() const {
    nlohmann::json j;
    j["fine"] = nlohmann::json::array();
    for (const auto& b : fine) j["fine"].push_back(bbox_json(b));
    j["coarse"] = bbox_json(coarse);
    j["coarse_tag"] = coarse_tag;
    j["fallback"] = fallback;
    return j;
}

MemoryProvenance MemoryProvenance::from_json(const nlohmann::json& j) {
    MemoryProvenance p;
    for (const auto& b : j.at("fine")) p.fine.push_back(bbox_from_json(b));
    p.coarse = bbox_from_json(j.at("coarse"));
    p.coarse_tag = j.at("coarse_tag").get<std::string>();
    p.fallback = j.at("fallback").get<bool>();
    return p;
}

std::vector<FramedImage> HybridMemory::prompt_images() const {
    std::vector<FramedImage> out;
    for (std::size_t i = 0; i < fine_crops.size(); ++i) out.push_back({&fine_crops[i], provenance.fine[i]});
    out.push_back({&coarse_view, provenance.coarse});
    return out;
}

HybridMemory build_memory(std::span<const EvidenceItem> evidence, const View* v_star, const RasterImage& image) {
    HybridMemory mem;
    if (evidence.empty() || !v_star) {
        mem.coarse_view = image;
        mem.provenance.coarse = image.bounds();
        mem.provenance.coarse_tag = "full";
        mem.provenance.fallback = true;
        return mem;
    }
    for (const auto& e : evidence) {
        mem.fine_crops.push_back(e.crop);
        mem.provenance.fine.push_back(e.bbox);
    }
    mem.coarse_view = v_star->crop;
    mem.provenance.coarse = v_star->bbox;
    mem.provenance.coarse_tag = v_star->tag;
    return mem;
}

std::string reason(const HybridMemory& memory, const Question& q, const LvlmClient& lvlm,
                   const GenerationSettings& gen) {
    const auto images = memory.prompt_images();
    return answer(lvlm, images, q, gen);
}

nlohmann::json RunTrace::to_json() const {
    nlohmann::json j;
    j["question"] = question;
    j["options"] = options;
    j["targets"] = targets;
    j["scan"] = scan;
    j["refocus"] = refocus;
    j["memory"] = memory ? memory->to_json() : nlohmann::json(nullptr);
    j["fallback"] = fallback;
    j["answer"] = answer;
    j["letter"] = letter ? nlohmann::json(std::string(1, *letter)) : nlohmann::json(nullptr);
    j["grounding"] = grounding ? bbox_json(*grounding) : nlohmann::json(nullptr);
    j["calls"] = calls.to_json();
    if (timing)
        j["timing_ms"] = {{"scan", timing->scan_ms},
                          {"refocus", timing->refocus_ms},
                          {"reason", timing->reason_ms},
                          {"total", timing->total_ms}};
    if (error_kind) j["error"] = {{"kind", *error_kind}, {"message", error_message.value_or("")}};
    return j;
}

RunResult run_pipeline(const RasterImage& image, Question q, const ExpertBundle& experts,
                       const PipelineConfig& cfg) {
    cfg.validate();
    experts.validate();
    if (image.empty()) throw InvalidInput("run_pipeline: image is empty");
    if (q.text.empty()) throw InvalidInput("run_pipeline: question is empty");

    CountingExperts counter(experts);
    const ExpertBundle ex = counter.bundle();
    RunResult res;
    RunTrace& tr = res.trace;
    tr.question = q.text;
    tr.options = q.options;
    StageTiming timing;
    const auto t0 = Clock::now();

    try {
        auto t = Clock::now();
        ScanResult scan = hierarchical_scan(image, q, ex, cfg.scan, cfg.gen);
        timing.scan_ms = ms_since(t);
        tr.targets = q.decomposed_targets.value_or(std::vector<std::string>{q.text});
        tr.scan = scan.trace.to_json();
        res.evidence = std::move(scan.evidence);

        if (!res.evidence.empty()) {
            t = Clock::now();
            RefocusResult rf = refocus(image, q, tr.targets, res.evidence, ex, cfg.refocus, cfg.gen);
            timing.refocus_ms = ms_since(t);
            tr.refocus = rf.to_json();
            res.v_star = rf.best();
            std::vector<BBox> boxes{res.v_star->bbox};
            for (const auto& e : res.evidence) boxes.push_back(e.bbox);
            res.grounding = union_bbox(boxes);
        }
        tr.fallback = res.evidence.empty();

        const HybridMemory mem = build_memory(res.evidence, res.v_star ? &*res.v_star : nullptr, image);
        tr.memory = mem.provenance;
        t = Clock::now();
        res.answer = reason(mem, q, *ex.lvlm, cfg.gen);
        timing.reason_ms = ms_since(t);
        const int n_opts = q.options.empty() ? 4 : static_cast<int>(q.options.size());
        res.letter = extract_option_letter(res.answer, n_opts);
    } catch (const ExpertError& e) {
        spdlog::warn("pipeline aborted by {} error: {}", e.kind(), e.what());
        tr.error_kind = e.kind();
        tr.error_message = e.what();
    }
    timing.total_ms = ms_since(t0);

    tr.answer = res.answer;
    tr.letter = res.letter;
    tr.grounding = res.grounding;
    tr.calls = counter.counts();
    if (cfg.record_timing) tr.timing = timing;
    return res;
}

}  // namespace deepscan
