#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace laip {

enum class EmbeddingFormat { Text, Binary };

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view text);

inline constexpr std::size_t kDefaultVocabularyLimit = 200000;

/// Counters for records skipped while loading.
struct LoadStats {
  std::size_t header_count = 0;
  std::size_t duplicates_skipped = 0;
  std::size_t zero_norm_skipped = 0;
};

/// Immutable word -> vector table. Rows are stored contiguously.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Builds a table from parallel arrays. Throws ValidationError on
  /// dimension mismatch, non-finite components, zero norms or duplicates.
  EmbeddingTable(std::size_t dim, std::vector<std::string> words, std::vector<float> components);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t row) const { return words_.at(row); }
  std::span<const float> vector(std::size_t row) const;
  double norm(std::size_t row) const { return norms_.at(row); }

  /// Verbatim lookup first, then a case-folded fallback.
  std::optional<std::size_t> find(std::string_view word) const;

  const LoadStats& stats() const noexcept { return stats_; }

  bool operator==(const EmbeddingTable& other) const {
    return dim_ == other.dim_ && words_ == other.words_ && data_ == other.data_;
  }

 private:
  friend EmbeddingTable load_embeddings(const std::filesystem::path&, EmbeddingFormat,
                                        std::optional<std::size_t>);
  void index_rows();

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> folded_;
  LoadStats stats_;
};

/// Parses a word2vec-style interchange file. `limit` caps the vocabulary to
/// the first entries of the file; duplicate and zero-norm records are
/// skipped and counted in stats().
EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                               std::optional<std::size_t> limit = kDefaultVocabularyLimit);

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path,
                     EmbeddingFormat format);

/// Cosine similarity with 64-bit accumulation. Throws on length mismatch
/// or a zero-norm argument.
double cosine_similarity(std::span<const float> u, std::span<const float> v);
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string word;
  double score = 0.0;

  bool operator==(const Neighbor&) const = default;
};

/// Exact top-k by cosine similarity, query row excluded. Ties are broken by
/// ascending word. Throws NotFoundError for out-of-vocabulary queries.
std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word,
                                        std::size_t k);

/// Top-k for an arbitrary query vector (no row excluded).
std::vector<Neighbor> nearest_to_vector(const EmbeddingTable& table, std::span<const float> query,
                                        std::size_t k, std::optional<std::size_t> exclude_row = {});

}  // namespace laip
