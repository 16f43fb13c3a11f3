// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyperpat/io.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace hyperpat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

std::string cli() {
    const char* p = std::getenv("HYPERPAT_CLI");
    return p ? p : "./hyperpat";
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("hyperpat_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        if (!fs::exists(cli())) GTEST_SKIP() << "CLI binary not found; set HYPERPAT_CLI";
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Runs the CLI with stdout captured; stderr goes to err.txt.
    Outcome run(const std::string& args) const {
        std::string cmd = cli() + " " + args + " 2>" + path("err.txt");
        Outcome r;
        FILE* f = ::popen(cmd.c_str(), "r");
        if (!f) return r;
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
        int status = ::pclose(f);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        return r;
    }

    std::string err() const { return read("err.txt"); }

    std::string read(const std::string& name) const {
        std::ifstream in(path(name), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void demo(const std::string& name) const { ASSERT_EQ(run("demo " + name + " --out " + dir_.string()).code, 0); }

    std::string files(const std::string& name) const {
        return path(name + ".instance.json") + " " + path(name + ".angles.json");
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DemoListNamesEveryDemo) {
    Outcome r = run("demo --list");
    EXPECT_EQ(r.code, 0);
    for (const char* n : {"torus-ideal-right-angles", "torus-hyperideal-2pi3", "k4-sphere-euclidean", "square-disk-framed",
                          "genus2-hyperbolic"})
        EXPECT_NE(r.out.find(n), std::string::npos) << n;
}

TEST_F(CliTest, DemoThenSolveSucceeds) {
    demo("torus-hyperideal-2pi3");
    Outcome v = run("validate " + files("torus-hyperideal-2pi3"));
    EXPECT_EQ(v.code, 0);
    EXPECT_EQ(Json::parse(v.out)["verdict"], "accepted");

    Outcome s = run("solve " + files("torus-hyperideal-2pi3"));
    ASSERT_EQ(s.code, 0) << err();
    Json doc = Json::parse(s.out);
    EXPECT_TRUE(doc["ok"].get<bool>());
    EXPECT_EQ(doc["solver"]["status"], "converged");
    EXPECT_EQ(doc["charts"].size(), 4u);
    EXPECT_TRUE(doc.contains("edge_class_lengths"));
}

TEST_F(CliTest, InputFilesMayComeInEitherOrder) {
    demo("k4-sphere-euclidean");
    Outcome a = run("validate " + files("k4-sphere-euclidean"));
    Outcome b = run("validate " + path("k4-sphere-euclidean.angles.json") + " " + path("k4-sphere-euclidean.instance.json"));
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, CombinedDemoFileIsAccepted) {
    ASSERT_EQ(run("demo genus2-hyperbolic --out " + path("g2.json")).code, 0);
    Outcome s = run("solve " + path("g2.json") + " --out " + path("g2.solution.json") + " --svg " + path("g2.svg"));
    ASSERT_EQ(s.code, 0) << err();
    Json summary = Json::parse(s.out);
    EXPECT_EQ(summary["exit_code"], 0);
    EXPECT_EQ(Json::parse(read("g2.solution.json"))["geometry"], "hyperbolic");
    EXPECT_NE(read("g2.svg").find("<polyline"), std::string::npos);
}

TEST_F(CliTest, QuarterPiTorusIsRejectedWithWitness) {
    demo("torus-ideal-right-angles");
    Json angles = Json::parse(read("torus-ideal-right-angles.angles.json"));
    for (auto& [k, v] : angles["theta"].items()) v = "pi/4";
    write_text_file(path("quarter.angles.json"), json_text(angles));
    Outcome v = run("validate " + path("torus-ideal-right-angles.instance.json") + " " + path("quarter.angles.json"));
    EXPECT_EQ(v.code, 2);
    Json j = Json::parse(v.out);
    EXPECT_EQ(j["verdict"], "rejected");
    EXPECT_EQ(j["reason"], "DomainViolation");
    EXPECT_EQ(j["witness"]["faces"].size(), 1u);

    Outcome s = run("solve " + path("torus-ideal-right-angles.instance.json") + " " + path("quarter.angles.json"));
    EXPECT_EQ(s.code, 2);
}

TEST_F(CliTest, DoubledFramedProblemValidates) {
    demo("square-disk-framed");
    Outcome d = run("double " + files("square-disk-framed") + " --out " + path("doubled.json"));
    ASSERT_EQ(d.code, 0) << err();
    Outcome v = run("validate " + path("doubled.json"));
    EXPECT_EQ(v.code, 0) << err();
    Json j = Json::parse(v.out);
    EXPECT_EQ(j["verdict"], "accepted");
    EXPECT_FALSE(j["framed"].get<bool>());
    Outcome f = run("validate " + files("square-disk-framed"));
    EXPECT_EQ(f.code, 0);
    EXPECT_TRUE(Json::parse(f.out)["framed"].get<bool>());
}

TEST_F(CliTest, UsageErrorsExitOne) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("validate " + path("missing.json")).code, 1);
    EXPECT_EQ(run("demo no-such-demo").code, 1);
    demo("k4-sphere-euclidean");
    EXPECT_EQ(run("solve " + files("k4-sphere-euclidean") + " --max-iter -3").code, 1);
    write_text_file(path("broken.json"), "{ not json");
    Outcome b = run("validate " + path("broken.json"));
    EXPECT_EQ(b.code, 1);
    EXPECT_NE(err().find("ParseError"), std::string::npos);
}

TEST_F(CliTest, SolverFailureExitsThree) {
    demo("genus2-hyperbolic");
    Outcome s = run("solve " + files("genus2-hyperbolic") + " --max-iter 1");
    EXPECT_EQ(s.code, 3);
    Json e = Json::parse(err());
    EXPECT_EQ(e["error"], "MaxIterations");
    EXPECT_TRUE(e["witness"].contains("boundary"));
}

TEST_F(CliTest, RerunsAreByteIdentical) {
    demo("genus2-hyperbolic");
    ASSERT_EQ(run("solve " + files("genus2-hyperbolic") + " --out " + path("a.json") + " --svg " + path("a.svg")).code, 0);
    ASSERT_EQ(run("solve " + files("genus2-hyperbolic") + " --out " + path("b.json") + " --svg " + path("b.svg") +
                  " --workers 3")
                  .code,
              0);
    EXPECT_EQ(read("a.json"), read("b.json"));
    EXPECT_EQ(read("a.svg"), read("b.svg"));
}

TEST_F(CliTest, RenderMatchesSolveSvg) {
    demo("k4-sphere-euclidean");
    ASSERT_EQ(run("solve " + files("k4-sphere-euclidean") + " --out " + path("k4.json") + " --svg " + path("k4.svg")).code, 0);
    Outcome r = run("render " + path("k4.json") + " --out " + path("k4.render.svg"));
    ASSERT_EQ(r.code, 0) << err();
    EXPECT_EQ(read("k4.svg"), read("k4.render.svg"));
    EXPECT_NE(read("k4.svg").find("viewBox=\"0 0 1024 1024\""), std::string::npos);
    ASSERT_EQ(run("demo k4-sphere-euclidean --out " + path("k4problem.json")).code, 0);
    EXPECT_EQ(run("render " + path("k4problem.json")).code, 1);
}

TEST_F(CliTest, DumpTetsWritesEveryTetrahedron) {
    demo("torus-ideal-right-angles");
    ASSERT_EQ(run("solve " + files("torus-ideal-right-angles") + " --dump-tets " + path("tets.json")).code, 0);
    Json t = Json::parse(read("tets.json"));
    ASSERT_TRUE(t.is_object() || t.is_array());
    const Json& list = t.is_array() ? t : t["tets"];
    EXPECT_EQ(list.size(), 8u);
}
