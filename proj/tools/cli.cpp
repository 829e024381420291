// Command-line entry point for the hint-feedback pipeline. Subcommands cover
// dataset construction, tabular training, the online loop, store inspection,
// prompt previews, reporting, workload synthesis and hint validation. Exit
// codes: 0 success, 1 usage error, 2 runtime failure.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hintloop/engine.hpp"
#include "hintloop/errors.hpp"
#include "hintloop/hint.hpp"
#include "hintloop/metrics.hpp"
#include "hintloop/orchestrator.hpp"
#include "hintloop/sft_dataset.hpp"
#include "hintloop/toml.hpp"
#include "hintloop/trainer.hpp"
#include "hintloop/workload_gen.hpp"

namespace fs = std::filesystem;
using namespace hintloop;

namespace {

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out.empty() ? "out" : out);
  fs::create_directories(dir);
  return dir;
}

int cmd_validate_hint(const std::string& text, const std::string& aliases_csv) {
  std::vector<std::string> aliases;
  if (!aliases_csv.empty()) {
    std::size_t start = 0;
    while (start <= aliases_csv.size()) {
      std::size_t comma = aliases_csv.find(',', start);
      if (comma == std::string::npos) comma = aliases_csv.size();
      if (comma > start) aliases.push_back(aliases_csv.substr(start, comma - start));
      start = comma + 1;
    }
  }
  HintOrError result = parse_hint(text, aliases);
  if (is_error(result)) {
    const auto& e = get_error(result);
    std::cerr << "error[" << to_string(e.kind) << "] at offset " << e.position
              << ": " << e.detail << "\n";
    return 2;
  }
  std::cout << serialize_hint(get_hint(result)) << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out, bool verbose) {
  RunConfig config = run_config_from_toml(config_path);
  if (seed) config.seed = *seed;
  fs::path dir = ensure_out_dir(out);

  Orchestrator orchestrator(config, dir);
  auto logs = orchestrator.run();

  write_run_log_jsonl(logs, dir / "run_log.jsonl");
  write_summary_csv(logs, dir / "summary.csv");
  write_report_json(logs, dir / "report.json");

  if (verbose) {
    for (const auto& log : logs) {
      std::cout << "iteration " << log.iteration << " [" << log.workload
                << "] ret=" << log.ret << " best_ret=" << log.best_ret
                << " hr=" << log.hr << "\n";
    }
  }
  const auto& last = logs.back();
  std::cout << "run complete: " << logs.size() << " iterations, final ret "
            << last.ret << ", best ret " << last.best_ret << ", hr " << last.hr
            << "\n";
  std::cout << "logs written to " << (dir / "run_log.jsonl").string() << "\n";
  return 0;
}

int cmd_sft_build(const std::string& workload_path, const std::string& mode_name,
                  const std::string& stamp, const std::string& out) {
  fs::path dir = ensure_out_dir(out);
  SimEngine engine(load_workload(workload_path));
  HintMode mode = hint_mode_from_string(mode_name);

  std::vector<std::pair<std::string, std::string>> queries;
  for (const auto& q : engine.workload().queries) {
    queries.emplace_back(q.sql_id, q.sql);
  }
  auto report = build_sft_dataset(engine, queries, mode,
                                  engine.workload().timeout_ms,
                                  stamp.empty() ? utc_now() : stamp);
  write_dataset(report.entries, dir / "sft_dataset.jsonl");
  std::cout << "wrote " << report.entries.size() << " pairs to "
            << (dir / "sft_dataset.jsonl").string() << "\n";
  for (const auto& [sql_id, reason] : report.failures) {
    std::cerr << "skipped " << sql_id << ": " << reason << "\n";
  }
  return 0;
}

int cmd_train_qgrpo(const std::string& config_path,
                    std::optional<std::uint64_t> seed, const std::string& out) {
  auto doc = parse_toml_file(config_path);
  GrpoConfig config = grpo_config_from_json(doc);
  if (seed) config.seed = *seed;
  if (!doc.contains("workload")) {
    raise(ErrorCode::InvalidConfig, "training config must name a workload file");
  }
  fs::path workload_path =
      fs::path(config_path).parent_path() / doc["workload"].get<std::string>();
  HintMode mode = hint_mode_from_string(doc.value("mode", "join_order"));
  fs::path dir = ensure_out_dir(out);

  SimEngine engine(load_workload(workload_path));
  TabularPolicy initial = make_uniform_policy(engine, mode);
  QgrpoResult result = qgrpo_train(initial, engine, mode, config);

  write_train_log_csv(result.logs, dir / "train_log.csv");

  nlohmann::ordered_json policy_json;
  for (const auto& sql_id : result.policy.context_ids()) {
    const auto& ctx = result.policy.context(sql_id);
    auto probs = result.policy.probabilities(sql_id);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      rows.push_back({{"hint", ctx.hint_keys[i]}, {"prob", probs[i]}});
    }
    policy_json[sql_id] = std::move(rows);
  }
  std::ofstream policy_out(dir / "policy.json");
  policy_out << policy_json.dump(2) << "\n";

  const auto& first = result.logs.front();
  const auto& last = result.logs.back();
  std::cout << "trained " << config.steps << " steps: mean reward "
            << first.mean_reward << " -> " << last.mean_reward << ", kl "
            << last.kl << ", best prob " << last.best_prob << "\n";
  return 0;
}

int cmd_store_dump(const std::string& journal, const std::string& out) {
  RecordStore store;
  std::size_t n = store.open_journal(journal);
  if (out.empty()) {
    store.dump(std::cout);
  } else {
    fs::path dir = ensure_out_dir(out);
    std::ofstream file(dir / "store_dump.jsonl");
    store.dump(file);
    std::cout << "dumped " << n << " records to "
              << (dir / "store_dump.jsonl").string() << "\n";
  }
  return 0;
}

int cmd_store_load(const std::string& journal) {
  RecordStore store;
  std::size_t n = store.open_journal(journal);
  std::cout << "loaded " << n << " records\n";
  std::map<std::string, const ExecutionRecord*> bests;
  for (const auto& r : store.all_records()) {
    auto best = store.best_record(r.sql_id);
    if (best) bests[r.sql_id] = nullptr;
  }
  for (auto& [sql_id, unused] : bests) {
    auto best = store.best_record(sql_id);
    std::cout << sql_id << ": best " << best->execution_time_ms << " ms ("
              << best->plan_text << ")\n";
  }
  return 0;
}

int cmd_prompt_preview(const std::string& config_path, const std::string& sql_id,
                       int iteration, std::optional<std::uint64_t> seed) {
  RunConfig config = run_config_from_toml(config_path);
  if (seed) config.seed = *seed;
  config.journal.reset();  // previews never touch the journal
  Orchestrator orchestrator(config, std::nullopt);
  std::cout << orchestrator.preview_prompt(sql_id, iteration) << "\n";
  return 0;
}

int cmd_report(const std::string& log_path, const std::string& out,
               bool plot_data) {
  auto logs = read_run_log_jsonl(log_path);
  fs::path dir = ensure_out_dir(out);
  if (plot_data) {
    write_plot_series(logs, dir / "series");
    std::cout << "series written to " << (dir / "series").string() << "\n";
    return 0;
  }
  write_summary_csv(logs, dir / "summary.csv");
  write_report_json(logs, dir / "report.json");
  std::cout << "report written to " << (dir / "report.json").string() << "\n";
  return 0;
}

int cmd_gen_workload(const WorkloadGenConfig& config, const std::string& out) {
  fs::path dir = ensure_out_dir(out);
  SimWorkload wl = synth_workload(config);
  fs::path file = dir / (config.name + "_workload.json");
  save_workload(wl, file);
  std::cout << "wrote " << wl.queries.size() << " queries to " << file.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Execution-feedback loop for query-plan hints"};
  app.require_subcommand(1);
  bool verbose = false;

  // validate-hint
  std::string hint_text, aliases_csv;
  auto* validate = app.add_subcommand("validate-hint", "Parse and echo a hint in canonical form");
  validate->add_option("hint", hint_text, "Hint text")->required();
  validate->add_option("--aliases", aliases_csv, "Comma-separated table aliases of the query");

  // run
  std::string run_config, run_out = "out";
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Drive the online pipeline from a TOML config");
  run->add_option("--config", run_config, "Run config (TOML)")->required();
  run->add_option("--seed", run_seed, "Override the config seed");
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--verbose", verbose, "Per-iteration progress output");

  // sft build
  auto* sft = app.add_subcommand("sft", "Supervised dataset commands");
  std::string sft_workload, sft_mode = "full_plan", sft_stamp, sft_out = "out";
  auto* sft_build = sft->add_subcommand("build", "Build the (prompt, hint) dataset from a workload");
  sft_build->add_option("--workload", sft_workload, "Workload file (JSON or TOML)")->required();
  sft_build->add_option("--mode", sft_mode, "join_order or full_plan");
  sft_build->add_option("--stamp", sft_stamp, "Provenance timestamp (defaults to now)");
  sft_build->add_option("--out", sft_out, "Output directory");
  sft->require_subcommand(1);

  // train qgrpo
  auto* train = app.add_subcommand("train", "Offline training commands");
  std::string train_config, train_out = "out";
  std::optional<std::uint64_t> train_seed;
  auto* train_qgrpo = train->add_subcommand("qgrpo", "Group-relative policy optimization on the tabular policy");
  train_qgrpo->add_option("--config", train_config, "Training config (TOML)")->required();
  train_qgrpo->add_option("--seed", train_seed, "Override the config seed");
  train_qgrpo->add_option("--out", train_out, "Output directory");
  train->require_subcommand(1);

  // store dump / load
  auto* store_cmd = app.add_subcommand("store", "Record store inspection");
  std::string store_journal, store_out;
  auto* store_dump = store_cmd->add_subcommand("dump", "Print the journal as JSONL");
  store_dump->add_option("--journal", store_journal, "Journal file")->required();
  store_dump->add_option("--out", store_out, "Write store_dump.jsonl here instead of stdout");
  auto* store_load = store_cmd->add_subcommand("load", "Load a journal and print best records");
  store_load->add_option("--journal", store_journal, "Journal file")->required();
  store_cmd->require_subcommand(1);

  // prompt preview
  auto* prompt_cmd = app.add_subcommand("prompt", "Prompt inspection");
  std::string preview_config, preview_query;
  int preview_iteration = 2;
  std::optional<std::uint64_t> preview_seed;
  auto* preview = prompt_cmd->add_subcommand("preview", "Print the exact bundle for a query/iteration");
  preview->add_option("--config", preview_config, "Run config (TOML)")->required();
  preview->add_option("--query", preview_query, "sql_id")->required();
  preview->add_option("--iteration", preview_iteration, "Iteration number");
  preview->add_option("--seed", preview_seed, "Override the config seed");
  prompt_cmd->require_subcommand(1);

  // report
  std::string report_log, report_out = "out";
  auto* report = app.add_subcommand("report", "Metrics from a run log");
  report->add_option("--log", report_log, "run_log.jsonl")->required();
  report->add_option("--out", report_out, "Output directory");
  auto* plot_data = report->add_subcommand("plot-data", "Emit x/y series files");
  plot_data->fallthrough();

  // gen-workload
  WorkloadGenConfig gen_config;
  std::string gen_out = "out", gen_mode = "join_order";
  auto* gen = app.add_subcommand("gen-workload", "Synthesize a workload with planted optima");
  gen->add_option("--name", gen_config.name, "Workload name");
  gen->add_option("--queries", gen_config.query_count, "Query count");
  gen->add_option("--min-aliases", gen_config.min_aliases, "Minimum tables per query");
  gen->add_option("--max-aliases", gen_config.max_aliases, "Maximum tables per query");
  gen->add_option("--mode", gen_mode, "join_order or full_plan");
  gen->add_option("--seed", gen_config.seed, "Generator seed");
  gen->add_option("--optimal-factor", gen_config.optimal_factor, "Optimum latency as a fraction of default");
  gen->add_option("--wobble", gen_config.wobble, "Deterministic per-hint latency wobble");
  gen->add_option("--noise", gen_config.noise, "Execution jitter fraction");
  gen->add_option("--timeout-ms", gen_config.timeout_ms, "Timeout ceiling");
  gen->add_option("--out", gen_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*validate) return cmd_validate_hint(hint_text, aliases_csv);
    if (*run) return cmd_run(run_config, run_seed, run_out, verbose);
    if (*sft_build) return cmd_sft_build(sft_workload, sft_mode, sft_stamp, sft_out);
    if (*train_qgrpo) return cmd_train_qgrpo(train_config, train_seed, train_out);
    if (*store_dump) return cmd_store_dump(store_journal, store_out);
    if (*store_load) return cmd_store_load(store_journal);
    if (*preview) return cmd_prompt_preview(preview_config, preview_query,
                                            preview_iteration, preview_seed);
    if (*report) return cmd_report(report_log, report_out, plot_data->parsed());
    if (*gen) {
      gen_config.mode = hint_mode_from_string(gen_mode);
      return cmd_gen_workload(gen_config, gen_out);
    }
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
