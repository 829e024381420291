#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "hintloop/embedding.hpp"
#include "hintloop/hint.hpp"

namespace hintloop {

// One stored observation. The journal serializes exactly these seven
// properties, one JSON object per line: id, iteration, vector, sql_id, sql,
// plan, execution_time_ms.
struct ExecutionRecord {
  std::uint64_t id = 0;
  int iteration = 0;  // 0 for records written at Preparation/Initialization
  std::vector<double> vector;
  std::string sql_id;
  std::string sql;
  Hint plan;
  std::string plan_text;  // canonical serialization of `plan`
  double execution_time_ms = 0;
};

enum class ReplacementDecision { Inserted, ReplacedBest, KeptExisting };

std::string_view to_string(ReplacementDecision d);

// Interface the pipeline drives; the local journal-backed store below is the
// default implementation, and an external vector-database adapter can stand
// behind the same surface.
class RecordStoreApi {
 public:
  virtual ~RecordStoreApi() = default;

  virtual ReplacementDecision record_outcome(const std::string& sql_id,
                                             const std::string& sql,
                                             int iteration, const Hint& hint,
                                             double latency_ms) = 0;

  // Top-k most similar records, self-excluded, one (best-latency) record per
  // sql_id. Returns fewer than k when fewer candidates exist.
  virtual std::vector<ExecutionRecord> retrieve_references(
      const std::string& q_sql, const std::string& q_sql_id, std::size_t k,
      SimilarityMetric metric) const = 0;

  // The iteration-0 record written at Initialization; throws MissingBaseline.
  virtual ExecutionRecord get_baseline(const std::string& sql_id) const = 0;
  virtual bool has_baseline(const std::string& sql_id) const = 0;

  virtual std::optional<ExecutionRecord> best_record(
      const std::string& sql_id) const = 0;

  virtual std::size_t size() const = 0;
};

// In-memory store with an optional append-only JSONL journal. Replacement
// keeps the lowest-latency record per sql_id live for retrieval; superseded
// records stay in the journal. Concurrent reads are safe; writes are
// exclusive and expected from a single orchestrator.
class RecordStore : public RecordStoreApi {
 public:
  explicit RecordStore(EmbedFn embedder = make_hash_embedder(),
                       std::size_t dim = kDefaultEmbeddingDim);

  ReplacementDecision record_outcome(const std::string& sql_id,
                                     const std::string& sql, int iteration,
                                     const Hint& hint,
                                     double latency_ms) override;

  std::vector<ExecutionRecord> retrieve_references(
      const std::string& q_sql, const std::string& q_sql_id, std::size_t k,
      SimilarityMetric metric) const override;

  ExecutionRecord get_baseline(const std::string& sql_id) const override;
  bool has_baseline(const std::string& sql_id) const override;
  std::optional<ExecutionRecord> best_record(const std::string& sql_id) const override;
  std::size_t size() const override;

  std::vector<double> embed(const std::string& sql) const;
  std::size_t dimension() const { return dim_; }

  // Replays an existing journal into memory, then appends future writes to
  // it. Returns the number of records loaded.
  std::size_t open_journal(const std::filesystem::path& path);

  // Writes every record as journal-format JSONL.
  void dump(std::ostream& out) const;

  std::vector<ExecutionRecord> all_records() const;

 private:
  ReplacementDecision insert_locked(ExecutionRecord record);
  void append_journal_line(const ExecutionRecord& record);

  EmbedFn embedder_;
  std::size_t dim_;
  std::vector<ExecutionRecord> records_;
  std::unordered_map<std::string, std::size_t> best_;
  std::unordered_map<std::string, std::size_t> baseline_;
  std::optional<std::filesystem::path> journal_;
  mutable std::shared_mutex mutex_;
};

}  // namespace hintloop
