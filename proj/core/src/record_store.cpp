#include "hintloop/record_store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <ostream>

#include <nlohmann/json.hpp>

#include "hintloop/errors.hpp"

namespace hintloop {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ReplacementDecision d) {
  switch (d) {
    case ReplacementDecision::Inserted: return "inserted";
    case ReplacementDecision::ReplacedBest: return "replaced_best";
    case ReplacementDecision::KeptExisting: return "kept_existing";
  }
  return "kept_existing";
}

RecordStore::RecordStore(EmbedFn embedder, std::size_t dim)
    : embedder_(std::move(embedder)), dim_(dim) {}

std::vector<double> RecordStore::embed(const std::string& sql) const {
  auto vec = embedder_(sql);
  if (vec.size() != dim_) {
    raise(ErrorCode::DimensionMismatch,
          "embedder produced dimension " + std::to_string(vec.size()) +
              ", store expects " + std::to_string(dim_));
  }
  return vec;
}

ReplacementDecision RecordStore::record_outcome(const std::string& sql_id,
                                                const std::string& sql,
                                                int iteration, const Hint& hint,
                                                double latency_ms) {
  ExecutionRecord record;
  record.iteration = iteration;
  record.vector = embed(sql);
  record.sql_id = sql_id;
  record.sql = sql;
  record.plan = hint;
  record.plan_text = serialize_hint(hint);
  record.execution_time_ms = latency_ms;

  std::unique_lock lock(mutex_);
  record.id = records_.empty() ? 1 : records_.back().id + 1;
  ReplacementDecision decision = insert_locked(record);
  append_journal_line(records_.back());
  return decision;
}

ReplacementDecision RecordStore::insert_locked(ExecutionRecord record) {
  const std::string sql_id = record.sql_id;
  const double latency = record.execution_time_ms;
  const int iteration = record.iteration;
  records_.push_back(std::move(record));
  std::size_t idx = records_.size() - 1;

  if (iteration == 0 && !baseline_.count(sql_id)) {
    baseline_[sql_id] = idx;
  }
  auto it = best_.find(sql_id);
  if (it == best_.end()) {
    best_[sql_id] = idx;
    return ReplacementDecision::Inserted;
  }
  if (latency < records_[it->second].execution_time_ms) {
    it->second = idx;
    return ReplacementDecision::ReplacedBest;
  }
  return ReplacementDecision::KeptExisting;
}

std::vector<ExecutionRecord> RecordStore::retrieve_references(
    const std::string& q_sql, const std::string& q_sql_id, std::size_t k,
    SimilarityMetric metric) const {
  std::shared_lock lock(mutex_);
  if (best_.empty() || k == 0) return {};
  auto qv = embed(q_sql);

  struct Scored {
    double score;
    std::size_t idx;
  };
  std::vector<Scored> scored;
  scored.reserve(best_.size());
  for (const auto& [sql_id, idx] : best_) {
    if (sql_id == q_sql_id) continue;
    scored.push_back({similarity(qv, records_[idx].vector, metric), idx});
  }
  const bool desc = ranks_descending(metric);
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return desc ? a.score > b.score : a.score < b.score;
    return records_[a.idx].id < records_[b.idx].id;
  });
  if (scored.size() > k) scored.resize(k);

  std::vector<ExecutionRecord> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(records_[s.idx]);
  return out;
}

ExecutionRecord RecordStore::get_baseline(const std::string& sql_id) const {
  std::shared_lock lock(mutex_);
  auto it = baseline_.find(sql_id);
  if (it == baseline_.end()) {
    raise(ErrorCode::MissingBaseline,
          "no initialization record for '" + sql_id + "'");
  }
  return records_[it->second];
}

bool RecordStore::has_baseline(const std::string& sql_id) const {
  std::shared_lock lock(mutex_);
  return baseline_.count(sql_id) > 0;
}

std::optional<ExecutionRecord> RecordStore::best_record(
    const std::string& sql_id) const {
  std::shared_lock lock(mutex_);
  auto it = best_.find(sql_id);
  if (it == best_.end()) return std::nullopt;
  return records_[it->second];
}

std::size_t RecordStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<ExecutionRecord> RecordStore::all_records() const {
  std::shared_lock lock(mutex_);
  return records_;
}

static ordered_json record_to_json(const ExecutionRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["iteration"] = r.iteration;
  j["vector"] = r.vector;
  j["sql_id"] = r.sql_id;
  j["sql"] = r.sql;
  j["plan"] = r.plan_text;
  j["execution_time_ms"] = r.execution_time_ms;
  return j;
}

void RecordStore::append_journal_line(const ExecutionRecord& record) {
  if (!journal_) return;
  std::ofstream out(*journal_, std::ios::app);
  if (!out) {
    raise(ErrorCode::Io, "cannot append to journal " + journal_->string());
  }
  out << record_to_json(record).dump() << "\n";
}

std::size_t RecordStore::open_journal(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  std::size_t loaded = 0;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (!in) {
      raise(ErrorCode::Io, "cannot read journal " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        raise(ErrorCode::SchemaViolation,
              "journal line " + std::to_string(line_no) + " is not JSON");
      }
      for (const char* key : {"id", "iteration", "vector", "sql_id", "sql",
                              "plan", "execution_time_ms"}) {
        if (!j.contains(key)) {
          raise(ErrorCode::SchemaViolation,
                "journal line " + std::to_string(line_no) + " missing '" +
                    key + "'");
        }
      }
      ExecutionRecord r;
      r.id = j["id"].get<std::uint64_t>();
      r.iteration = j["iteration"].get<int>();
      r.vector = j["vector"].get<std::vector<double>>();
      r.sql_id = j["sql_id"].get<std::string>();
      r.sql = j["sql"].get<std::string>();
      r.plan_text = j["plan"].get<std::string>();
      r.execution_time_ms = j["execution_time_ms"].get<double>();
      if (r.vector.size() != dim_) {
        raise(ErrorCode::SchemaViolation,
              "journal line " + std::to_string(line_no) + " vector dimension " +
                  std::to_string(r.vector.size()) + ", store expects " +
                  std::to_string(dim_));
      }
      auto parsed = parse_hint(r.plan_text);
      if (is_error(parsed)) {
        raise(ErrorCode::SchemaViolation,
              "journal line " + std::to_string(line_no) + " plan: " +
                  get_error(parsed).detail);
      }
      r.plan = get_hint(parsed);
      insert_locked(std::move(r));
      ++loaded;
    }
  }
  journal_ = path;
  return loaded;
}

void RecordStore::dump(std::ostream& out) const {
  std::shared_lock lock(mutex_);
  for (const auto& r : records_) {
    out << record_to_json(r).dump() << "\n";
  }
}

}  // namespace hintloop
