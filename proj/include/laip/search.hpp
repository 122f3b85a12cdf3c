#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <string_view>
#include <vector>

#include "laip/analysis.hpp"
#include "laip/corpus.hpp"
#include "laip/embeddings.hpp"
#include "laip/lexicon.hpp"

namespace laip {

struct SearchHit {
  std::string proposal_id;
  std::string item_id;
  double score = 0.0;
  std::string snippet;

  bool operator==(const SearchHit&) const = default;
};

struct ResolvedGroup {
  std::string topic;
  std::string canonical;

  bool operator==(const ResolvedGroup&) const = default;
};

struct KeywordSearchResult {
  /// Groups the query resolved to; empty for a literal search.
  std::vector<ResolvedGroup> resolved;
  bool literal = false;
  std::vector<SearchHit> hits;
};

/// Resolves the query to lexicon groups: groups owning a variant whose
/// tokens equal the query, or failing that, groups with a variant occurring
/// inside the query. Hits are items matching those groups, scored by match
/// count. An unresolvable query is searched as a literal token n-gram.
KeywordSearchResult keyword_search(std::string_view query, const Corpus& corpus, const Lexicon& lexicon,
                                   const CoverageMatrix& keyword_matrix);

/// Token -> inverse document frequency over corpus items, log(N / df).
using IdfWeights = std::unordered_map<std::string, double>;

IdfWeights compute_idf(const Corpus& corpus);

/// Mean of the vectors of in-vocabulary tokens, idf-weighted when `idf` is
/// given (tokens missing from it get weight 1). Throws ValidationError when
/// no token is in the vocabulary.
std::vector<double> embed_paragraph(std::string_view text, const EmbeddingTable& table,
                                    const IdfWeights* idf = nullptr);

struct IndexEntry {
  std::string proposal_id;
  std::string item_id;
  std::vector<float> vector;
  std::uint32_t token_hits = 0;

  bool operator==(const IndexEntry&) const = default;
};

class ItemEmbeddingIndex {
 public:
  ItemEmbeddingIndex() = default;
  ItemEmbeddingIndex(std::size_t dim, std::vector<IndexEntry> entries);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<IndexEntry>& entries() const noexcept { return entries_; }

  bool operator==(const ItemEmbeddingIndex&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<IndexEntry> entries_;
};

/// Embeds every item with at least one in-vocabulary token.
ItemEmbeddingIndex build_index(const Corpus& corpus, const EmbeddingTable& table, const IdfWeights* idf = nullptr);

/// Binary cache: "LAIPIDX1", u32 dim, u32 count, then per entry a 64-byte
/// proposal id, a 32-byte item id (NUL padded), u32 token hits and `dim`
/// little-endian floats.
void save_index(const ItemEmbeddingIndex& index, const std::filesystem::path& path);
ItemEmbeddingIndex load_index(const std::filesystem::path& path);

/// Top-k items by cosine similarity to the embedded query; ties by
/// (proposal_id, item_id).
std::vector<SearchHit> paragraph_search(std::string_view query_text, const ItemEmbeddingIndex& index,
                                        const EmbeddingTable& table, const Corpus& corpus, std::size_t k,
                                        const IdfWeights* idf = nullptr);

}  // namespace laip
