#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gr1/strategy/export.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

extern char** environ;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string spec(const std::string& name) { return std::string(GR1_SPEC_DIR) + "/" + name + ".gr1spec"; }
std::string script(const std::string& name) { return std::string(GR1_SCRIPT_DIR) + "/" + name + ".json"; }

Result run(const std::string& args, bool with_stderr = false) {
  std::string cmd = std::string(GR1_CLI_PATH) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("gr1_cli_test_" + std::to_string(getpid()));
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

json without_times(json j) {
  j.erase("times");
  return j;
}

}  // namespace

TEST(Check, RealizableSpecExitsZero) {
  auto r = run("check " + spec("v1"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("realizable"), std::string::npos);
  EXPECT_EQ(r.out.find("unrealizable"), std::string::npos);
  EXPECT_NE(r.out.find("realizability"), std::string::npos);
  EXPECT_NE(r.out.find("sec"), std::string::npos);
}

TEST(Check, UnrealizableSpecExitsTwo) {
  auto r = run("check " + spec("v1_c1_strong_guarantee"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("unrealizable"), std::string::npos);
}

TEST(Check, MissingFileExitsOne) {
  auto r = run("check nonexistent.file", true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("nonexistent.file"), std::string::npos);
  EXPECT_EQ(r.out.find("terminate"), std::string::npos);
}

TEST(Check, SyntaxErrorReportsPosition) {
  auto p = write("bad.gr1spec", "VAR\n  x : boolean;\nGAR G (x &);\n");
  auto r = run("check " + p.string(), true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("bad.gr1spec:3:"), std::string::npos) << r.out;
}

TEST(Check, TypeErrorExitsOne) {
  auto p = write("typo.gr1spec", "VAR\n  x : boolean;\nGAR G (y);\n");
  auto r = run("check " + p.string(), true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("typo.gr1spec:3:"), std::string::npos) << r.out;
}

TEST(Check, UsageErrorExitsOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Check, RowMatchesV1Shape) {
  auto r = run("check " + spec("v1"));
  EXPECT_NE(r.out.find("1 safety, 5 times P26, P15"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 initial, 8 safety, 1 justice, P09, P20"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("4 environment, 6 system"), std::string::npos);
  EXPECT_NE(r.out.find("1 manual, 12 pattern"), std::string::npos);
}

TEST(Check, JsonRowForV2) {
  auto r = run("check --json " + spec("v2"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "realizable");
  EXPECT_EQ(j["assumptions"]["safety"], 2);
  EXPECT_EQ(j["assumptions"]["P26"], 6);
  EXPECT_EQ(j["assumptions"]["P15"], 1);
  EXPECT_EQ(j["guarantees"]["initial"], 1);
  EXPECT_EQ(j["guarantees"]["safety"], 10);
  EXPECT_EQ(j["guarantees"]["justice"], 1);
  EXPECT_EQ(j["variables"]["env"], 5);
  EXPECT_EQ(j["variables"]["sys"], 6);
  EXPECT_EQ(j["variables"]["manual_aux"], 2);
  EXPECT_EQ(j["justice"]["n"], 3);
  EXPECT_EQ(j["justice"]["m"], 7);
  EXPECT_EQ(j["strategy"]["kind"], "controller");
  EXPECT_GT(j["strategy"]["states"].get<int>(), 0);
  for (const char* phase : {"parse", "normalize", "encode", "realizability", "construction"})
    EXPECT_TRUE(j["times"].contains(phase)) << phase;
}

TEST(Check, JsonIsStableAcrossRuns) {
  auto a = run("check --json " + spec("v1"));
  auto b = run("check --json " + spec("v1"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_times(json::parse(a.out)).dump(), without_times(json::parse(b.out)).dump());
  auto c = run("check --json " + spec("v1_c1_strong_guarantee"));
  auto d = run("check --json " + spec("v1_c1_strong_guarantee"));
  EXPECT_EQ(without_times(json::parse(c.out)).dump(), without_times(json::parse(d.out)).dump());
}

TEST(Check, EmptySpecGivesZeroRow) {
  auto p = write("empty.gr1spec", "");
  auto r = run("check --json " + p.string());
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  for (const char* side : {"assumptions", "guarantees"})
    for (const auto& [k, v] : j[side].items()) EXPECT_EQ(v, 0) << side << " " << k;
  for (const auto& [k, v] : j["variables"].items()) EXPECT_EQ(v, 0) << k;
  EXPECT_EQ(j["justice"]["n"], 0);
  EXPECT_EQ(j["justice"]["m"], 0);
}

TEST(Check, AstDump) {
  auto r = run("check --ast " + spec("v1"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_TRUE(j.is_object());
  EXPECT_FALSE(j.empty());
}

TEST(Synth, WritesLoadableController) {
  auto out = scratch("v1.json"), dot = scratch("v1.dot");
  auto r = run("synth --json " + spec("v1") + " --out " + out.string() + " --dot " + dot.string());
  ASSERT_EQ(r.code, 0);
  auto report = json::parse(r.out);
  std::ifstream in(out);
  auto s = gr1::strategy::from_json(json::parse(in));
  EXPECT_TRUE(s.is_controller());
  EXPECT_EQ(s.states.size(), report["strategy"]["states"].get<std::size_t>());
  EXPECT_GT(fs::file_size(dot), 0u);
}

TEST(Synth, UnrealizableExitsTwo) {
  auto out = scratch("none.json");
  fs::remove(out);
  EXPECT_EQ(run("synth " + spec("v1_c1_strong_guarantee") + " --out " + out.string()).code, 2);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Counter, WritesCounterStrategy) {
  auto out = scratch("c3.json");
  auto r = run("counter --json " + spec("v2_c3_bad_ack") + " --out " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["strategy"]["kind"], "counterstrategy");
  std::ifstream in(out);
  EXPECT_FALSE(gr1::strategy::from_json(json::parse(in)).is_controller());
  EXPECT_EQ(run("counter " + spec("v1")).code, 2);
}

TEST(Sim, BenignRunDelivers) {
  auto report = scratch("run.json");
  auto r = run("sim --json --spec " + spec("v1") + " --script " + script("benign") + " --steps 3000 --report " +
               report.string());
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["schedule"], "delayed");
  EXPECT_GT(j["deliveries"].get<int>(), 0);
  EXPECT_TRUE(j["guarantee_violations"].empty());
  std::ifstream in(report);
  EXPECT_EQ(json::parse(in), j);
}

TEST(Sim, ContinuousScheduleIsPickedForAckSpecs) {
  auto r = run("sim --json --spec " + spec("v2") + " --script " + script("benign") + " --steps 500");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["schedule"], "continuous");
  EXPECT_EQ(j["k"], 3);
}

TEST(Sim, BadInputsExitOne) {
  EXPECT_EQ(run("sim --spec " + spec("v1") + " --script nope.json").code, 1);
  auto bad = write("bad.json", R"({"track":{"cells":2}})");
  EXPECT_EQ(run("sim --spec " + spec("v1") + " --script " + bad.string()).code, 1);
  auto junk = write("junk.json", "{");
  EXPECT_EQ(run("sim --spec " + spec("v1") + " --script " + junk.string()).code, 1);
  EXPECT_EQ(run("sim --spec " + spec("v1") + " --script " + script("benign") + " --schedule sometimes").code, 1);
}

TEST(Patterns, ListsCatalog) {
  auto r = run("patterns list --json");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0]["id"], "P09");
  EXPECT_EQ(j[3]["id"], "P26");
  auto text = run("patterns list");
  EXPECT_NE(text.out.find("G (p -> F s)"), std::string::npos);
}

TEST(Playout, ServesSessionsOverHttp) {
  int out[2];
  ASSERT_EQ(pipe(out), 0);
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, out[1], 1);
  posix_spawn_file_actions_addclose(&fa, out[0]);
  std::string path = GR1_CLI_PATH, spec_path = spec("v1");
  std::vector<char*> argv{path.data(), const_cast<char*>("playout"), const_cast<char*>("serve"), spec_path.data(),
                          const_cast<char*>("--port"), const_cast<char*>("0"), nullptr};
  pid_t pid;
  ASSERT_EQ(posix_spawn(&pid, path.c_str(), &fa, nullptr, argv.data(), environ), 0);
  posix_spawn_file_actions_destroy(&fa);
  close(out[1]);
  std::string line;
  char c;
  while (read(out[0], &c, 1) == 1 && c != '\n') line += c;
  close(out[0]);
  auto colon = line.rfind(':');
  ASSERT_NE(colon, std::string::npos) << line;
  int port = std::stoi(line.substr(colon + 1));

  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Post("/sessions", R"({"spec":"v1","mode":"human-env"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto id = json::parse(res->body)["id"].get<std::string>();
  json move{{"station", false}, {"distSense", "CLEAR"}, {"cargoSense", "CLEAR"}, {"emgOff", false}};
  res = cli.Post("/sessions/" + id + "/step", json{{"assignment", move}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "running");
  res = cli.Get("/artifacts");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["artifacts"][0]["name"], "v1");

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}
