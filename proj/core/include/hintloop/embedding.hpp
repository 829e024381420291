#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hintloop {

enum class SimilarityMetric { Cosine, InnerProduct, L2 };

std::string_view to_string(SimilarityMetric m);
SimilarityMetric similarity_metric_from_string(std::string_view s);

// Cosine and inner product rank descending, L2 distance ranks ascending.
bool ranks_descending(SimilarityMetric m);

inline constexpr std::size_t kDefaultEmbeddingDim = 384;
inline constexpr std::uint64_t kDefaultEmbedderSeed = 0x5eed5eedULL;

// Deterministic SQL-text embedder: signed feature hashing of lowercased
// token n-grams (n = 1..3), L2-normalized. Stands in for an external encoder
// model; throws EmptyInput when the text has no tokens.
std::vector<double> hash_embedding(const std::string& text,
                                   std::size_t dim = kDefaultEmbeddingDim,
                                   std::uint64_t seed = kDefaultEmbedderSeed);

using EmbedFn = std::function<std::vector<double>(const std::string&)>;

EmbedFn make_hash_embedder(std::size_t dim = kDefaultEmbeddingDim,
                           std::uint64_t seed = kDefaultEmbedderSeed);

// Pairwise score under the metric. Throws DimensionMismatch on unequal
// dimensions and ZeroVector when cosine meets a zero-norm vector.
double similarity(const std::vector<double>& u, const std::vector<double>& v,
                  SimilarityMetric metric);

}  // namespace hintloop
