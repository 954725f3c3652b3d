// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/harness/evaluate.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <fstream>

#include "deepscan/error.hpp"
#include "deepscan/harness/backends.hpp"
#include "deepscan/imaging/geometry.hpp"
#include "deepscan/imaging/png_io.hpp"
#include "deepscan/parallel.hpp"
#include "deepscan/serialize.hpp"

namespace deepscan {
namespace {

std::filesystem::path trace_path(const std::filesystem::path& dir, const BenchItem& item, int r, EvalMode mode) {
    const std::string name = mode == EvalMode::Cyclic ? item.id + ".r" + std::to_string(r) + ".json" : item.id + ".json";
    return dir / name;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    static std::atomic<unsigned long long> serial{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(serial.fetch_add(1));
    {
        std::ofstream out(tmp);
        out << text << '\n';
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// What one run contributes to an item outcome.
struct RunRecord {
    bool correct = false;
    std::optional<BBox> grounding;
    long judge_calls = 0;
    std::string error;
};

RunRecord record_from(const nlohmann::json& doc) {
    RunRecord r;
    const auto& tr = doc.at("trace");
    r.correct = doc.at("correct").get<bool>();
    if (!tr.at("grounding").is_null()) r.grounding = bbox_from_json(tr.at("grounding"));
    r.judge_calls = tr.at("calls").at("evidence_judgment").get<long>();
    if (doc.contains("error")) r.error = doc.at("error").get<std::string>();
    return r;
}

}  // namespace

const char* to_string(EvalMode m) noexcept { return m == EvalMode::Plain ? "plain" : "cyclic"; }

EvalMode eval_mode_from_string(const std::string& name) {
    if (name == "plain") return EvalMode::Plain;
    if (name == "cyclic") return EvalMode::Cyclic;
    throw InvalidInput("mode must be plain or cyclic, got '" + name + "'");
}

BenchItem rotate_item(const BenchItem& item, int r) {
    BenchItem out = item;
    const int n = static_cast<int>(item.options.size());
    if (n == 0) return out;
    r = ((r % n) + n) % n;
    for (int i = 0; i < n; ++i) out.options[static_cast<std::size_t>(i)] = item.options[static_cast<std::size_t>((i + r) % n)];
    out.answer = static_cast<char>('A' + ((item.answer - 'A') - r + n) % n);
    return out;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["mode"] = to_string(mode);
    j["n"] = n;
    j["accuracy"] = accuracy;
    j["subsets"] = nlohmann::json::object();
    for (const auto& [name, v] : subsets) j["subsets"][name] = {{"n", v.first}, {"accuracy", v.second}};
    j["n_grounded"] = n_grounded;
    j["miou"] = miou ? nlohmann::json(*miou) : nlohmann::json(nullptr);
    j["hit_at_0_5"] = hit_at_05 ? nlohmann::json(*hit_at_05) : nlohmann::json(nullptr);
    j["mean_judge_calls"] = mean_judge_calls;
    j["errors"] = errors;
    if (wall_time_s) j["wall_time_s"] = *wall_time_s;
    j["items"] = nlohmann::json::array();
    for (const auto& o : items) {
        nlohmann::json e = {{"id", o.id}, {"correct", o.correct}, {"runs", o.runs}, {"judge_calls", o.judge_calls}};
        e["iou"] = o.iou ? nlohmann::json(*o.iou) : nlohmann::json(nullptr);
        if (!o.subset.empty()) e["subset"] = o.subset;
        if (!o.error.empty()) e["error"] = o.error;
        j["items"].push_back(std::move(e));
    }
    return j;
}

EvalReport summarize(std::vector<ItemOutcome> outcomes, EvalMode mode, long total_runs) {
    EvalReport rep;
    rep.mode = mode;
    rep.n = outcomes.size();
    std::size_t correct = 0, hits = 0;
    double iou_sum = 0.0;
    long judge = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> by_subset;
    for (const auto& o : outcomes) {
        correct += o.correct;
        judge += o.judge_calls;
        rep.errors += !o.error.empty();
        if (!o.subset.empty()) {
            auto& s = by_subset[o.subset];
            ++s.first;
            s.second += o.correct;
        }
        if (o.iou) {
            ++rep.n_grounded;
            iou_sum += *o.iou;
            hits += *o.iou >= 0.5;
        }
    }
    rep.accuracy = rep.n ? static_cast<double>(correct) / static_cast<double>(rep.n) : 0.0;
    for (const auto& [name, v] : by_subset)
        rep.subsets[name] = {v.first, static_cast<double>(v.second) / static_cast<double>(v.first)};
    if (rep.n_grounded) {
        rep.miou = iou_sum / static_cast<double>(rep.n_grounded);
        rep.hit_at_05 = static_cast<double>(hits) / static_cast<double>(rep.n_grounded);
    }
    rep.mean_judge_calls = total_runs ? static_cast<double>(judge) / static_cast<double>(total_runs) : 0.0;
    rep.items = std::move(outcomes);
    return rep;
}

ItemRunner make_pipeline_runner(const ExpertProvider& provider, const PipelineConfig& cfg) {
    return [&provider, cfg](const BenchItem& item, const Question& q) {
        const RasterImage image = read_png(item.image_path);
        if (item.gt_bbox && !image.bounds().contains(*item.gt_bbox))
            throw InvalidInput("gt_bbox of " + item.id + " lies outside its image");
        return run_pipeline(image, q, provider.for_image(item.image_path), cfg);
    };
}

EvalReport evaluate(const std::vector<BenchItem>& items, const ItemRunner& runner, const EvalOptions& opts) {
    if (opts.jobs < 1) throw InvalidInput("jobs must be >= 1");
    if (opts.resume && !opts.trace_dir) throw InvalidInput("resume needs a trace directory");
    if (opts.trace_dir) std::filesystem::create_directories(*opts.trace_dir);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<ItemOutcome> outcomes(items.size());
    std::atomic<long> total_runs{0};
    parallel_for(items.size(), opts.jobs, [&](std::size_t idx) {
        const BenchItem& item = items[idx];
        ItemOutcome& out = outcomes[idx];
        out.id = item.id;
        out.subset = item.subset;
        const int rotations = opts.mode == EvalMode::Cyclic ? static_cast<int>(item.options.size()) : 1;
        bool all_correct = true;
        for (int r = 0; r < rotations; ++r) {
            const BenchItem rotated = rotate_item(item, r);
            std::optional<std::filesystem::path> path;
            if (opts.trace_dir) path = trace_path(*opts.trace_dir, item, r, opts.mode);

            RunRecord rec;
            bool reused = false;
            if (opts.resume && path && std::filesystem::exists(*path)) {
                std::ifstream in(*path);
                const auto doc = nlohmann::json::parse(in, nullptr, false);
                try {
                    rec = record_from(doc);
                    reused = true;
                } catch (const std::exception&) {
                    spdlog::warn("ignoring unreadable trace {}", path->string());
                }
            }
            if (!reused) {
                nlohmann::json doc = {{"item", item.id}, {"rotation", r}, {"expected", std::string(1, rotated.answer)}};
                try {
                    const Question q{rotated.question, rotated.options, {}};
                    const RunResult res = runner(rotated, q);
                    rec.correct = res.ok() && res.letter && *res.letter == rotated.answer;
                    rec.grounding = res.grounding;
                    rec.judge_calls = res.trace.calls.evidence_judgment;
                    if (!res.ok()) rec.error = *res.trace.error_kind + ": " + res.trace.error_message.value_or("");
                    doc["trace"] = res.trace.to_json();
                } catch (const std::exception& e) {
                    rec.error = e.what();
                    doc["trace"] = {{"grounding", nullptr}, {"calls", {{"evidence_judgment", 0}}}};
                }
                if (!rec.error.empty()) {
                    spdlog::warn("item {} rotation {} failed: {}", item.id, r, rec.error);
                    doc["error"] = rec.error;
                }
                doc["correct"] = rec.correct;
                if (path) write_atomic(*path, doc.dump(1));
            }
            ++total_runs;
            all_correct = all_correct && rec.correct;
            out.judge_calls += rec.judge_calls;
            if (out.error.empty()) out.error = rec.error;
            if (r == 0 && item.gt_bbox) out.iou = rec.grounding ? iou(*rec.grounding, *item.gt_bbox) : 0.0;
        }
        out.runs = rotations;
        out.correct = all_correct;
    });

    EvalReport rep = summarize(std::move(outcomes), opts.mode, total_runs);
    if (opts.with_timing)
        rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace deepscan
