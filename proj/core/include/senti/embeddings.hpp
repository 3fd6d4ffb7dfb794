#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "senti/tensor.hpp"
#include "senti/types.hpp"

namespace senti::embed {

/// Fixed-size tweet representation: d rows, maxl columns. Tokens past
/// maxl are truncated; columns at index >= length stay zero.
struct InputMatrix {
  std::size_t d = 0;
  std::size_t maxl = 0;
  std::size_t length = 0;             // tokens actually placed
  std::vector<double> values;         // d x maxl, row-major

  ConstMatView view() const { return {d, maxl, values.data()}; }
  MatView view() { return {d, maxl, values.data()}; }
};

/// token -> d-dimensional vector. Unknown tokens get a vector with
/// components uniform in [-0.25, 0.25], a pure function of
/// (oov_seed, token), cached so repeated lookups agree. The cache insert
/// is mutex-guarded; lookups of known tokens never lock.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, std::uint64_t oov_seed)
      : dim_(dim), oov_seed_(oov_seed),
        oov_cache_(std::make_unique<OovCache>()) {}

  std::size_t dim() const { return dim_; }
  std::uint64_t oov_seed() const { return oov_seed_; }
  std::size_t vocab_size() const { return entries_.size(); }
  bool contains(const std::string& token) const {
    return entries_.contains(token);
  }

  /// Inserts or replaces (last occurrence wins). Returns false when the
  /// token was already present.
  bool insert(std::string token, std::vector<double> vec);

  std::span<const double> lookup(const std::string& token) const;

 private:
  struct OovCache {
    std::mutex mutex;
    std::unordered_map<std::string, std::vector<double>> vectors;
  };

  std::size_t dim_;
  std::uint64_t oov_seed_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  std::unique_ptr<OovCache> oov_cache_;  // behind a pointer so moves work
};

struct EmbeddingLoadStats {
  std::size_t duplicates = 0;
  std::size_t declared_vocab = 0;  // header V
  std::size_t loaded_vocab = 0;
};

/// Text embedding format: first line "V D", then one "token c1 ... cD"
/// line per entry. Throws DataError on component-count or numeric
/// parse failures, naming the line.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::uint64_t oov_seed,
                               EmbeddingLoadStats* stats = nullptr);

/// Column j holds the vector of tokens[j] for j < min(|tokens|, maxl);
/// the rest stays zero. Throws std::invalid_argument on an empty token
/// sequence (ingestion filters those).
InputMatrix build_input_matrix(const EmbeddingTable& table,
                               std::span<const std::string> tokens,
                               std::size_t maxl);

}  // namespace senti::embed
