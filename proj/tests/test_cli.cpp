#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace std::string_literals;

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  std::string command = "\""s + CLI_BIN + "\" " + args + " 2>&1";
  std::array<char, 4096> buffer;
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe)) {
    output.append(buffer.data(), n);
  }
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hintloop_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("validate-hint echoes canonical text and exits 0") {
  auto result = run_cli("validate-hint \"Leading (a (b c))\" --aliases a,b,c");
  CHECK(result.exit_code == 0);
  CHECK(result.output == "Leading (a (b c))\n");
}

TEST_CASE("validate-hint reports bracket mismatches with exit 2") {
  auto result = run_cli("validate-hint \"Leading ((a b\"");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("BracketMismatch") != std::string::npos);
  CHECK(result.output.find("offset") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("run").exit_code == 1);              // missing --config
  CHECK(run_cli("no-such-command").exit_code == 1);
}

TEST_CASE("--help enumerates every subcommand") {
  auto result = run_cli("--help");
  CHECK(result.exit_code == 0);
  for (const char* name : {"validate-hint", "run", "sft", "train", "store",
                           "prompt", "report", "gen-workload"}) {
    CHECK_MESSAGE(result.output.find(name) != std::string::npos, name);
  }
  CHECK(run_cli("sft --help").output.find("build") != std::string::npos);
  CHECK(run_cli("train --help").output.find("qgrpo") != std::string::npos);
  CHECK(run_cli("store --help").output.find("dump") != std::string::npos);
  CHECK(run_cli("report --help").output.find("plot-data") != std::string::npos);
}

TEST_CASE("gen-workload, run, report and store round trip through the filesystem") {
  fs::path dir = temp_dir("pipeline");
  auto gen = run_cli("gen-workload --name t --queries 2 --min-aliases 3 --max-aliases 3 --seed 3 --out " +
                     dir.string());
  CHECK(gen.exit_code == 0);
  REQUIRE(fs::exists(dir / "t_workload.json"));

  std::ofstream(dir / "run.toml") << R"(
seed = 3
iterations = 8
k = 1
journal = "store.jsonl"

[generator]
kind = "mutating"

[[workload]]
name = "t"
file = "t_workload.json"
)";
  auto run1 = run_cli("run --config " + (dir / "run.toml").string() + " --out " +
                      (dir / "outA").string());
  CHECK(run1.exit_code == 0);
  CHECK(fs::exists(dir / "outA" / "run_log.jsonl"));
  CHECK(fs::exists(dir / "outA" / "summary.csv"));
  CHECK(fs::exists(dir / "outA" / "report.json"));
  CHECK(fs::exists(dir / "outA" / "store.jsonl"));

  auto run2 = run_cli("run --config " + (dir / "run.toml").string() + " --out " +
                      (dir / "outB").string());
  CHECK(run2.exit_code == 0);
  CHECK(read_file(dir / "outA" / "run_log.jsonl") ==
        read_file(dir / "outB" / "run_log.jsonl"));

  auto report = run_cli("report --log " + (dir / "outA" / "run_log.jsonl").string() +
                        " --out " + (dir / "rep").string());
  CHECK(report.exit_code == 0);
  CHECK(fs::exists(dir / "rep" / "report.json"));

  auto plot = run_cli("report plot-data --log " +
                      (dir / "outA" / "run_log.jsonl").string() + " --out " +
                      (dir / "rep").string());
  CHECK(plot.exit_code == 0);
  CHECK(fs::exists(dir / "rep" / "series" / "ret.csv"));

  auto load = run_cli("store load --journal " + (dir / "outA" / "store.jsonl").string());
  CHECK(load.exit_code == 0);
  CHECK(load.output.find("loaded") != std::string::npos);

  auto dump = run_cli("store dump --journal " + (dir / "outA" / "store.jsonl").string());
  CHECK(dump.exit_code == 0);
  CHECK(dump.output.find("\"sql_id\"") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("sft build writes a dataset and prompt preview prints the bundle") {
  fs::path dir = temp_dir("sft");
  run_cli("gen-workload --name s --queries 2 --min-aliases 3 --max-aliases 3 --seed 4 --out " +
          dir.string());

  auto build = run_cli("sft build --workload " + (dir / "s_workload.json").string() +
                       " --mode join_order --stamp 2026-01-01T00:00:00Z --out " +
                       (dir / "ds").string());
  CHECK(build.exit_code == 0);
  std::string dataset = read_file(dir / "ds" / "sft_dataset.jsonl");
  CHECK(dataset.find("\"hint\"") != std::string::npos);
  CHECK(dataset.find("2026-01-01T00:00:00Z") != std::string::npos);

  std::ofstream(dir / "run.toml") << R"(
seed = 4
iterations = 6
k = 1

[generator]
kind = "mutating"

[[workload]]
name = "s"
file = "s_workload.json"
)";
  auto preview = run_cli("prompt preview --config " + (dir / "run.toml").string() +
                         " --query s_q01 --iteration 3");
  CHECK(preview.exit_code == 0);
  CHECK(preview.output.find("## Regulations") != std::string::npos);
  CHECK(preview.output.find("Query: s_q01") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("train qgrpo writes logs and the trained policy") {
  fs::path dir = temp_dir("train");
  run_cli("gen-workload --name tr --queries 2 --min-aliases 3 --max-aliases 3 --seed 5 --out " +
          dir.string());
  std::ofstream(dir / "train.toml") << R"(
seed = 5
workload = "tr_workload.json"
mode = "join_order"
group_size = 4
steps = 40
learning_rate = 0.1
)";
  auto train = run_cli("train qgrpo --config " + (dir / "train.toml").string() +
                       " --out " + (dir / "out").string());
  CHECK(train.exit_code == 0);
  std::string log = read_file(dir / "out" / "train_log.csv");
  CHECK(log.find("step,mean_reward,kl,best_prob") == 0);
  CHECK(fs::exists(dir / "out" / "policy.json"));
  fs::remove_all(dir);
}

TEST_CASE("runtime failures exit 2") {
  auto result = run_cli("run --config /nonexistent/config.toml --out /tmp/x");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("error[") != std::string::npos);
}
