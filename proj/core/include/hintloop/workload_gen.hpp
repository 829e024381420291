#pragma once

#include <cstdint>
#include <string>

#include "hintloop/engine.hpp"

namespace hintloop {

// Synthesizes a random workload with a planted optimal hint per query. The
// latency of every hint in the space is graded by its mutation-graph
// distance to the planted optimum:
//
//   latency(h) = base * (optimal_factor + (1 - optimal_factor) * d(h)/D)
//
// where d is the BFS distance under single local edits and D its maximum.
// The default hint is planted at distance D, so the optimum runs at exactly
// optimal_factor times the default latency, every non-optimal hint is
// strictly slower, and from any hint some single edit strictly improves
// latency. Hints other than the optimum and the default get a small
// deterministic upward wobble.
struct WorkloadGenConfig {
  std::string name = "synthetic";
  std::size_t query_count = 10;
  std::size_t min_aliases = 4;
  std::size_t max_aliases = 5;
  HintMode mode = HintMode::JoinOrder;
  std::uint64_t seed = 1;
  double base_latency_lo_ms = 60;
  double base_latency_hi_ms = 220;
  double optimal_factor = 0.4;
  double wobble = 0.04;
  double noise = 0;
  double timeout_ms = 10000;
};

SimWorkload synth_workload(const WorkloadGenConfig& config);

}  // namespace hintloop
