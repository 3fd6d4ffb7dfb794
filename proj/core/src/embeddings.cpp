#include "senti/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "senti/rng.hpp"

namespace senti::embed {
namespace {

std::vector<double> oov_vector(std::size_t dim, std::uint64_t oov_seed,
                               const std::string& token) {
  auto eng = rng::make_engine(oov_seed ^ rng::fnv1a64(token));
  std::vector<double> vec(dim);
  for (double& x : vec) x = rng::uniform_range(eng, -0.25, 0.25);
  return vec;
}

// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_component(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    std::ostringstream msg;
    msg << "non-numeric component '" << field << "' at line " << line_no;
    throw DataError(msg.str());
  }
  return value;
}

std::size_t parse_count(std::string_view field, const char* what) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DataError(std::string("bad embedding header: invalid ") + what);
  }
  return value;
}

}  // namespace

bool EmbeddingTable::insert(std::string token, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("embedding vector length mismatch");
  }
  auto [it, inserted] = entries_.insert_or_assign(std::move(token),
                                                  std::move(vec));
  return inserted;
}

std::span<const double> EmbeddingTable::lookup(const std::string& token) const {
  if (const auto it = entries_.find(token); it != entries_.end()) {
    return it->second;
  }
  std::lock_guard<std::mutex> lock(oov_cache_->mutex);
  auto it = oov_cache_->vectors.find(token);
  if (it == oov_cache_->vectors.end()) {
    it = oov_cache_->vectors
             .emplace(token, oov_vector(dim_, oov_seed_, token))
             .first;
  }
  return it->second;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::uint64_t oov_seed,
                               EmbeddingLoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open embedding file: " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty embedding file: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() != 2) {
    throw DataError("bad embedding header: expected 'V D' at line 1");
  }
  const std::size_t declared_vocab = parse_count(header[0], "vocabulary size");
  const std::size_t dim = parse_count(header[1], "dimension");
  if (dim == 0) {
    throw DataError("bad embedding header: dimension must be positive");
  }

  EmbeddingTable table(dim, oov_seed);
  EmbeddingLoadStats local;
  local.declared_vocab = declared_vocab;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != dim + 1) {
      std::ostringstream msg;
      msg << "expected " << dim << " components at line " << line_no;
      throw DataError(msg.str());
    }
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      vec[i] = parse_component(fields[i + 1], line_no);
    }
    if (!table.insert(std::string(fields[0]), std::move(vec))) {
      ++local.duplicates;
    }
  }
  local.loaded_vocab = table.vocab_size();
  if (stats != nullptr) *stats = local;
  return table;
}

InputMatrix build_input_matrix(const EmbeddingTable& table,
                               std::span<const std::string> tokens,
                               std::size_t maxl) {
  if (maxl == 0) {
    throw std::invalid_argument("maxl must be positive");
  }
  if (tokens.empty()) {
    throw std::invalid_argument("cannot build input matrix from empty token sequence");
  }
  const std::size_t d = table.dim();
  InputMatrix input;
  input.d = d;
  input.maxl = maxl;
  input.length = std::min(tokens.size(), maxl);
  input.values.assign(d * maxl, 0.0);
  for (std::size_t j = 0; j < input.length; ++j) {
    const auto vec = table.lookup(tokens[j]);
    for (std::size_t r = 0; r < d; ++r) {
      input.values[r * maxl + j] = vec[r];
    }
  }
  return input;
}

}  // namespace senti::embed
