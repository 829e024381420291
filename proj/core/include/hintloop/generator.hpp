#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hintloop/hint.hpp"
#include "hintloop/prompt.hpp"
#include "hintloop/rng.hpp"

namespace hintloop {

// ---------------------------------------------------------------------------
// Local hint edits
// ---------------------------------------------------------------------------

enum class MutationKind { LeafSwap, Rotate, JoinFlip, ScanFlip };

// All hints one local edit away: every pair of leaves swapped, every legal
// subtree rotation, and (full-plan mode) every single method flip. Structural
// edits carry the old join methods over to the new subtrees; a subtree that
// did not exist before inherits the method of the smallest enclosing old join.
std::vector<std::pair<MutationKind, Hint>> mutation_neighbors(const Hint& hint);

// One edit chosen uniformly over all legal edit instances. Returns the input
// unchanged when no edit exists (single-table hints).
Hint mutate_hint(const Hint& hint, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct MutationWeights {
  double leaf_swap = 0.35;
  double rotate = 0.35;
  double join_flip = 0.15;
  double scan_flip = 0.15;
};

// Fixed playback of raw outputs; call i for a query at generation iteration i
// replays outputs[(i - 1) mod size], independent of call interleaving.
struct ScriptedGenerator {
  std::vector<std::string> outputs;
};

// Applies one weighted local edit to the prompt's best-so-far hint, falling
// back to the first reference hint, then to a random join order over the
// query's aliases. Reads nothing but the BestSoFar and References sections.
struct MutatingGenerator {
  std::uint64_t seed = 1;
  MutationWeights weights;
};

// Chat-completions HTTP client; request/response schema in docs/remote-api.md.
struct RemoteGenerator {
  std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
  std::string model;
  std::string auth_token_env;  // name of the env var holding the bearer token
  double timeout_s = 30;
};

struct GeneratorSpec {
  std::variant<ScriptedGenerator, MutatingGenerator, RemoteGenerator> kind =
      MutatingGenerator{};
  std::size_t output_budget = 4096;
};

class HintGenerator {
 public:
  explicit HintGenerator(GeneratorSpec spec);

  // Raw text from the underlying generator, before validation.
  std::string generate_raw(const PromptBundle& prompt,
                           const std::vector<std::string>& known_aliases);

  // Raw generation followed by normalize_generated_text. Remote transport
  // failures raise RemoteUnavailable/RemoteTimeout; everything else comes
  // back as a Hint or a typed validation error.
  HintOrError generate(const PromptBundle& prompt,
                       const std::vector<std::string>& known_aliases);

  const GeneratorSpec& spec() const { return spec_; }

 private:
  GeneratorSpec spec_;
};

}  // namespace hintloop
