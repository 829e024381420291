#include "hintloop/embedding.hpp"

#include <cctype>
#include <cmath>

#include "hintloop/errors.hpp"
#include "hintloop/rng.hpp"

namespace hintloop {

std::string_view to_string(SimilarityMetric m) {
  switch (m) {
    case SimilarityMetric::Cosine: return "cosine";
    case SimilarityMetric::InnerProduct: return "inner_product";
    case SimilarityMetric::L2: return "l2";
  }
  return "cosine";
}

SimilarityMetric similarity_metric_from_string(std::string_view s) {
  if (s == "cosine") return SimilarityMetric::Cosine;
  if (s == "inner_product") return SimilarityMetric::InnerProduct;
  if (s == "l2") return SimilarityMetric::L2;
  raise(ErrorCode::InvalidConfig, "unknown similarity metric '" + std::string(s) + "'");
}

bool ranks_descending(SimilarityMetric m) {
  return m != SimilarityMetric::L2;
}

static std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || raw == '_') {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<double> hash_embedding(const std::string& text, std::size_t dim,
                                   std::uint64_t seed) {
  auto tokens = tokenize(text);
  if (tokens.empty()) {
    raise(ErrorCode::EmptyInput, "no tokens to embed");
  }
  std::vector<double> vec(dim, 0.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    if (tokens.size() < n) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::uint64_t h = fnv1a(seed, n);
      for (std::size_t j = 0; j < n; ++j) {
        h = fnv1a(h, tokens[i + j]);
        h = fnv1a(h, std::string_view("\x1f", 1));
      }
      double sign = (h >> 63) ? -1.0 : 1.0;
      vec[h % dim] += sign;
    }
  }
  double norm = 0;
  for (double v : vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0) {
    // All n-gram signs cancelled; nudge a deterministic component so the
    // vector stays usable under cosine.
    vec[fnv1a(seed, tokens.front()) % dim] = 1.0;
    norm = 1.0;
  }
  for (double& v : vec) v /= norm;
  return vec;
}

EmbedFn make_hash_embedder(std::size_t dim, std::uint64_t seed) {
  return [dim, seed](const std::string& text) {
    return hash_embedding(text, dim, seed);
  };
}

double similarity(const std::vector<double>& u, const std::vector<double>& v,
                  SimilarityMetric metric) {
  if (u.size() != v.size()) {
    raise(ErrorCode::DimensionMismatch,
          "vectors of dimension " + std::to_string(u.size()) + " and " +
              std::to_string(v.size()));
  }
  double dot = 0, nu = 0, nv = 0, dist2 = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
    double d = u[i] - v[i];
    dist2 += d * d;
  }
  switch (metric) {
    case SimilarityMetric::InnerProduct:
      return dot;
    case SimilarityMetric::L2:
      return std::sqrt(dist2);
    case SimilarityMetric::Cosine:
      if (nu == 0 || nv == 0) {
        raise(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
      }
      return dot / (std::sqrt(nu) * std::sqrt(nv));
  }
  return 0;
}

}  // namespace hintloop
