#include "hintloop/orchestrator.hpp"

#include <algorithm>

#include "hintloop/errors.hpp"
#include "hintloop/metrics.hpp"
#include "hintloop/prompt.hpp"
#include "hintloop/toml.hpp"

namespace hintloop {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

static GeneratorSpec generator_from_json(const json& doc, std::uint64_t run_seed) {
  GeneratorSpec spec;
  if (doc.is_null()) return spec;
  std::string kind = doc.value("kind", "mutating");
  if (kind == "scripted") {
    ScriptedGenerator g;
    if (!doc.contains("outputs")) {
      raise(ErrorCode::InvalidConfig, "scripted generator needs an outputs list");
    }
    g.outputs = doc["outputs"].get<std::vector<std::string>>();
    spec.kind = std::move(g);
  } else if (kind == "mutating") {
    MutatingGenerator g;
    g.seed = doc.value("seed", derive_seed(run_seed, "generator"));
    if (doc.contains("weights")) {
      const auto& w = doc["weights"];
      g.weights.leaf_swap = w.value("leaf_swap", 0.0);
      g.weights.rotate = w.value("rotate", 0.0);
      g.weights.join_flip = w.value("join_flip", 0.0);
      g.weights.scan_flip = w.value("scan_flip", 0.0);
    }
    spec.kind = std::move(g);
  } else if (kind == "remote") {
    RemoteGenerator g;
    if (!doc.contains("endpoint") || !doc.contains("model")) {
      raise(ErrorCode::InvalidConfig, "remote generator needs endpoint and model");
    }
    g.endpoint = doc["endpoint"].get<std::string>();
    g.model = doc["model"].get<std::string>();
    g.auth_token_env = doc.value("auth_token_env", "");
    g.timeout_s = doc.value("timeout_s", 30.0);
    spec.kind = std::move(g);
  } else {
    raise(ErrorCode::InvalidConfig, "unknown generator kind '" + kind + "'");
  }
  spec.output_budget = doc.value("output_budget", std::size_t{4096});
  return spec;
}

RunConfig run_config_from_toml(const std::filesystem::path& path) {
  json doc = parse_toml_file(path);
  std::filesystem::path base = path.parent_path();

  RunConfig config;
  if (!doc.contains("seed")) {
    raise(ErrorCode::InvalidConfig, "run config must set a seed");
  }
  config.seed = doc["seed"].get<std::uint64_t>();
  config.iterations = doc.value("iterations", 50);
  if (config.iterations < 1) {
    raise(ErrorCode::InvalidConfig, "iterations must be >= 1");
  }
  config.k = doc.value("k", std::size_t{1});
  config.metric = similarity_metric_from_string(doc.value("metric", "cosine"));
  config.mode = hint_mode_from_string(doc.value("mode", "join_order"));
  config.prepare = doc.value("prepare", false);
  if (doc.contains("journal")) {
    config.journal = std::filesystem::path(doc["journal"].get<std::string>());
  }
  config.generator =
      generator_from_json(doc.value("generator", json()), config.seed);

  if (!doc.contains("workload")) {
    raise(ErrorCode::InvalidConfig, "run config needs at least one [[workload]]");
  }
  for (const auto& w : doc["workload"]) {
    WorkloadRef ref;
    if (!w.contains("file")) {
      raise(ErrorCode::InvalidConfig, "[[workload]] needs a file");
    }
    ref.file = base / w["file"].get<std::string>();
    ref.name = w.value("name", ref.file.stem().string());
    if (w.contains("timeout_ms")) ref.timeout_ms = w["timeout_ms"].get<double>();
    config.workloads.push_back(std::move(ref));
  }
  if (doc.contains("episodes")) {
    EpisodeConfig ep;
    ep.count = doc["episodes"].value("count", std::size_t{1});
    if (doc["episodes"].contains("seed")) {
      ep.seed = doc["episodes"]["seed"].get<std::uint64_t>();
    }
    config.episodes = ep;
  }
  return config;
}

// ---------------------------------------------------------------------------
// Episode scheduling
// ---------------------------------------------------------------------------

std::vector<EpisodeSpan> schedule_episodes(const std::vector<std::string>& names,
                                           std::size_t episode_count,
                                           int total_iterations,
                                           std::uint64_t seed) {
  if (names.empty() || episode_count < 1 ||
      episode_count > static_cast<std::size_t>(total_iterations)) {
    raise(ErrorCode::InfeasiblePartition,
          std::to_string(episode_count) + " episodes cannot partition " +
              std::to_string(total_iterations) + " iterations");
  }
  Rng rng(derive_seed(seed, "episodes"));

  // episode_count-1 distinct cut points in [1, total-1].
  std::vector<int> cuts;
  {
    std::vector<int> candidates(total_iterations - 1);
    for (int i = 0; i < total_iterations - 1; ++i) candidates[i] = i + 1;
    for (std::size_t i = 0; i + 1 < episode_count; ++i) {
      std::size_t j = i + rng.uniform_index(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
    }
    cuts.assign(candidates.begin(), candidates.begin() + (episode_count - 1));
    std::sort(cuts.begin(), cuts.end());
  }

  std::vector<EpisodeSpan> spans;
  int first = 1;
  for (std::size_t e = 0; e < episode_count; ++e) {
    int last = e < cuts.size() ? cuts[e] : total_iterations;
    EpisodeSpan span;
    span.workload = names[rng.uniform_index(names.size())];
    span.first_iteration = first;
    span.last_iteration = last;
    spans.push_back(span);
    first = last + 1;
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Preparation
// ---------------------------------------------------------------------------

PrepareReport prepare(RecordStoreApi& store, ExecutionEngine& engine,
                      const std::vector<std::pair<std::string, std::string>>& seed_queries,
                      HintMode mode, double timeout_ms) {
  PrepareReport report;
  for (const auto& [sql_id, sql] : seed_queries) {
    try {
      EngineRequest request{sql_id, sql, std::nullopt, timeout_ms};
      ExecutionOutcome outcome = engine.execute(request);
      Hint hint = extract_hint(simplify_plan(outcome.plan), mode);
      store.record_outcome(sql_id, sql, 0, hint, outcome.latency_ms);
      ++report.loaded;
    } catch (const Error& e) {
      report.failures.emplace_back(sql_id, e.what());
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Orchestrator
// ---------------------------------------------------------------------------

Orchestrator::Orchestrator(RunConfig config,
                           std::optional<std::filesystem::path> out_dir)
    : config_(std::move(config)), generator_(config_.generator) {
  if (config_.workloads.empty()) {
    raise(ErrorCode::InvalidConfig, "run config has no workloads");
  }
  for (const auto& ref : config_.workloads) {
    if (engines_.count(ref.name)) {
      raise(ErrorCode::InvalidConfig, "duplicate workload name '" + ref.name + "'");
    }
    SimWorkload wl = load_workload(ref.file);
    timeouts_[ref.name] = ref.timeout_ms.value_or(wl.timeout_ms);
    engines_[ref.name] = std::make_unique<SimEngine>(std::move(wl));
    workload_order_.push_back(ref.name);
  }
  if (config_.journal) {
    std::filesystem::path journal =
        out_dir ? *out_dir / *config_.journal : *config_.journal;
    store_.open_journal(journal);
  }
}

SimEngine& Orchestrator::engine_for(const std::string& workload_name) {
  return *engines_.at(workload_name);
}

std::vector<IterationLog> Orchestrator::run() {
  return run_internal(nullptr, 0, nullptr);
}

std::string Orchestrator::preview_prompt(const std::string& sql_id,
                                         int iteration) {
  std::string captured;
  run_internal(&sql_id, iteration, &captured);
  if (captured.empty()) {
    raise(ErrorCode::UnknownQuery,
          "'" + sql_id + "' has no generation prompt at iteration " +
              std::to_string(iteration));
  }
  return captured;
}

std::vector<IterationLog> Orchestrator::run_internal(
    const std::string* capture_sql_id, int capture_iteration,
    std::string* captured) {
  query_state_.clear();

  if (config_.prepare) {
    for (const auto& name : workload_order_) {
      SimEngine& engine = engine_for(name);
      std::vector<std::pair<std::string, std::string>> queries;
      for (const auto& q : engine.workload().queries) {
        queries.emplace_back(q.sql_id, q.sql);
      }
      prepare(store_, engine, queries, config_.mode, timeouts_[name]);
    }
  }

  // Which workloads run in which iteration.
  std::vector<std::vector<std::string>> plan(config_.iterations);
  if (config_.episodes) {
    std::uint64_t ep_seed = config_.episodes->seed.value_or(config_.seed);
    auto spans = schedule_episodes(workload_order_, config_.episodes->count,
                                   config_.iterations, ep_seed);
    for (const auto& span : spans) {
      for (int i = span.first_iteration; i <= span.last_iteration; ++i) {
        plan[i - 1] = {span.workload};
      }
    }
  } else {
    for (auto& slot : plan) slot = workload_order_;
  }

  std::vector<IterationLog> logs;
  for (int iteration = 1; iteration <= config_.iterations; ++iteration) {
    IterationLog log;
    log.iteration = iteration;
    for (const auto& name : plan[iteration - 1]) {
      if (!log.workload.empty()) log.workload += "+";
      log.workload += name;
    }

    double best_total = 0;
    for (const auto& name : plan[iteration - 1]) {
      SimEngine& engine = engine_for(name);
      const double timeout = timeouts_[name];
      for (const auto& q : engine.workload().queries) {
        QueryRow row;
        row.sql_id = q.sql_id;

        if (!store_.has_baseline(q.sql_id)) {
          // Initialization: execute without a hint, store the baseline.
          EngineRequest request{q.sql_id, q.sql, std::nullopt, timeout};
          ExecutionOutcome outcome = engine.execute(request);
          Hint default_hint = extract_hint(simplify_plan(outcome.plan), config_.mode);
          store_.record_outcome(q.sql_id, q.sql, 0, default_hint, outcome.latency_ms);
          QueryState& state = query_state_[q.sql_id];
          state.default_hint = default_hint;
          state.default_known = true;
          row.stage = "init";
          row.latency_ms = outcome.latency_ms;
          row.timed_out = outcome.timed_out;
        } else {
          // Generation.
          QueryState& state = query_state_[q.sql_id];
          if (!state.default_known) {
            state.default_hint = store_.get_baseline(q.sql_id).plan;
            state.default_known = true;
          }
          PlanStats stats = engine.collect_stats(q.sql_id);
          ++state.generation_count;
          const bool include_best = state.generation_count > 1;
          PromptBundle bundle =
              build_prompt_from_store(store_, q.sql_id, q.sql, iteration,
                                      config_.k, config_.metric, stats,
                                      include_best);
          if (capture_sql_id && *capture_sql_id == q.sql_id &&
              capture_iteration == iteration && captured) {
            *captured = bundle.rendered;
            return logs;
          }
          std::vector<std::string> known_aliases;
          for (const auto& [alias, rows] : stats.table_cardinalities) {
            known_aliases.push_back(alias);
          }

          std::optional<std::string> error_kind;
          std::optional<Hint> hint;
          try {
            HintOrError result = generator_.generate(bundle, known_aliases);
            if (is_error(result)) {
              error_kind = std::string(to_string(get_error(result).kind));
            } else {
              hint = get_hint(result);
            }
          } catch (const Error& e) {
            error_kind = std::string(error_code_name(e.code()));
          }

          row.stage = "gen";
          if (hint) {
            EngineRequest request{q.sql_id, q.sql, hint, timeout};
            ExecutionOutcome outcome = engine.execute(request);
            auto decision = store_.record_outcome(q.sql_id, q.sql, iteration,
                                                  *hint, outcome.latency_ms);
            row.hint_text = serialize_hint(*hint);
            row.latency_ms = outcome.latency_ms;
            row.timed_out = outcome.timed_out;
            row.replaced = decision == ReplacementDecision::ReplacedBest;
            row.matches_default = hint_equals_default(*hint, state.default_hint);
          } else {
            // No retry: the default plan runs and is recorded.
            EngineRequest request{q.sql_id, q.sql, std::nullopt, timeout};
            ExecutionOutcome outcome = engine.execute(request);
            store_.record_outcome(q.sql_id, q.sql, iteration,
                                  state.default_hint, outcome.latency_ms);
            row.error = error_kind;
            row.latency_ms = outcome.latency_ms;
            row.timed_out = outcome.timed_out;
          }
        }

        double baseline_ms = store_.get_baseline(q.sql_id).execution_time_ms;
        double best_ms = store_.best_record(q.sql_id)->execution_time_ms;
        row.eta = compute_gain(baseline_ms, best_ms);
        row.best_latency_ms = best_ms;

        log.total_latency_ms += row.latency_ms;
        log.total_baseline_ms += baseline_ms;
        best_total += best_ms;
        log.rows.push_back(std::move(row));
      }
    }
    if (log.total_baseline_ms > 0) {
      log.ret = log.total_latency_ms / log.total_baseline_ms;
      log.best_ret = best_total / log.total_baseline_ms;
    }
    log.hr = homogeneous_rate(log);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace hintloop
