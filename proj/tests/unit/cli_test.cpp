// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "deepscan/harness/suite.hpp"
#include "deepscan/synth/oracle.hpp"
#include "stub_server.hpp"

namespace deepscan {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome cli(const std::string& args) {
    const std::string cmd = std::string(DEEPSCAN_CLI) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    Outcome o;
    if (!p) return o;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, n);
    const int status = ::pclose(p);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("deepscan-cli-" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        items_ = write_suite(dir_ / "suite", 40, 2);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string run_args(const BenchItem& item, std::string experts = "") const {
        if (experts.empty()) experts = "oracle:" + quote(dir_ / "suite");
        std::string a = "run --image " + quote(item.image_path) + " --question '" + item.question + "' --options";
        for (const auto& o : item.options) a += " '" + o + "'";
        return a + " --experts " + experts;
    }

    fs::path dir_;
    std::vector<BenchItem> items_;
};

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("--bogus").code, 2);
    EXPECT_EQ(cli("eval --bench " + quote(dir_ / "suite" / "bench.jsonl") + " --mode sideways --experts oracle:x").code, 2);
    EXPECT_EQ(cli(run_args(items_[0]) + " --set scan.nope=1").code, 2);
    EXPECT_EQ(cli(run_args(items_[0]) + " --set novalue").code, 2);
    EXPECT_EQ(cli("run --image " + quote(items_[0].image_path) + " --question q").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(CliTest, RunPrintsAnswerAndWritesTrace) {
    const auto& item = items_[0];
    const fs::path overlay = dir_ / "overlay.png";
    const Outcome o = cli(run_args(item) + " --overlay " + quote(overlay));
    ASSERT_EQ(o.code, 0);
    EXPECT_EQ(o.out.front(), item.answer);
    const fs::path trace = fs::path(item.image_path).replace_extension(".trace.json");
    ASSERT_TRUE(fs::exists(trace));
    std::ifstream in(trace);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["answer"].get<std::string>() + "\n", o.out);
    EXPECT_TRUE(fs::exists(overlay));

    const Outcome k1 = cli(run_args(item) + " --set scan.k=1 --trace " + quote(dir_ / "k1.json"));
    ASSERT_EQ(k1.code, 0);
    std::ifstream in2(dir_ / "k1.json");
    EXPECT_LE(nlohmann::json::parse(in2)["calls"]["evidence_judgment"].get<int>(), 1);
}

TEST_F(CliTest, RunReportsMissingFixtureAsRuntimeFailure) {
    EXPECT_EQ(cli(run_args(items_[0], "replay:" + quote(dir_ / "nofixtures"))).code, 1);
}

TEST_F(CliTest, EvalWritesReport) {
    const fs::path report = dir_ / "report.json";
    const Outcome o = cli("eval --bench " + quote(dir_ / "suite" / "bench.jsonl") + " --mode cyclic --jobs 2 --experts oracle:" +
                          quote(dir_ / "suite") + " --out " + quote(report));
    ASSERT_EQ(o.code, 0);
    std::ifstream in(report);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["mode"], "cyclic");
    EXPECT_EQ(j["n"], 2);
    EXPECT_EQ(j["accuracy"], 1.0);
}

TEST_F(CliTest, SynthGenerate) {
    const fs::path out = dir_ / "gen";
    const Outcome o = cli("synth generate --seed 5 --count 2 --kind spatial --out " + quote(out));
    ASSERT_EQ(o.code, 0);
    EXPECT_TRUE(fs::exists(out / "bench.jsonl"));
    int pngs = 0;
    for (const auto& e : fs::directory_iterator(out)) pngs += e.path().extension() == ".png";
    EXPECT_EQ(pngs, 2);
    EXPECT_EQ(cli("synth generate --seed 5 --out " + quote(out) + " --area-ratio 2").code, 2);
}

TEST_F(CliTest, ServeCheck) {
    const auto spec = synth::generate_scene(3, {}).second;
    testing::StubServer server(synth::make_oracle_experts(spec));
    const Outcome ok = cli("serve-check " + server.url() + " --timeout 5");
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_TRUE(nlohmann::json::parse(ok.out)["passed"].get<bool>());
    EXPECT_EQ(cli("serve-check http://127.0.0.1:1 --timeout 1").code, 1);
}

}  // namespace
}  // namespace deepscan
