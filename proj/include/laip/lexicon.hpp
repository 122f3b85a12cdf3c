#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laip/embeddings.hpp"
#include "laip/text.hpp"

namespace laip {

enum class Provenance { Manual, Morphological, Embedding };

std::string_view to_string(Provenance p);

struct Variant {
  std::string text;
  Provenance provenance = Provenance::Manual;
  /// Set only for Provenance::Embedding.
  std::optional<double> similarity;
  /// tokenize(text); filled in by the Lexicon constructor.
  TokenSequence tokens;

  bool operator==(const Variant& o) const {
    return text == o.text && provenance == o.provenance && similarity == o.similarity;
  }
};

struct KeywordGroup {
  std::string canonical;
  /// Canonical first, then the remaining variants in ascending text order.
  std::vector<Variant> variants;

  const Variant* find(std::string_view text) const;
  bool is_multiword() const;

  bool operator==(const KeywordGroup&) const = default;
};

struct Topic {
  std::string name;
  std::vector<KeywordGroup> groups;

  bool operator==(const Topic&) const = default;
};

/// A cross-topic reuse of one surface form. Permitted, but reported.
struct CrossTopicDuplicate {
  std::string text;
  std::string first_topic;
  std::string second_topic;
};

class Lexicon {
 public:
  Lexicon() = default;
  /// Normalizes variant order, tokenizes variants and checks invariants.
  explicit Lexicon(std::vector<Topic> topics);

  const std::vector<Topic>& topics() const noexcept { return topics_; }
  const Topic* find_topic(std::string_view name) const;
  const KeywordGroup* find_group(std::string_view topic, std::string_view canonical) const;

  std::size_t canonical_count() const;
  std::size_t variant_count() const;
  std::vector<CrossTopicDuplicate> cross_topic_duplicates() const;

  bool operator==(const Lexicon&) const = default;

 private:
  std::vector<Topic> topics_;
};

Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(std::string_view json_text);
std::string lexicon_to_json(const Lexicon& lexicon);
void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

inline constexpr double kDefaultThreshold = 0.55;
inline constexpr std::size_t kDefaultCandidateK = 30;

struct Expansion {
  std::vector<Neighbor> candidates;
  std::vector<Variant> accepted;
  bool out_of_vocabulary = false;
};

/// Ranked embedding candidates for one canonical keyword and those at or
/// above `threshold`. Multi-word canonicals are never expanded.
Expansion expand_keyword(const EmbeddingTable& table, std::string_view canonical, std::size_t candidate_k,
                         double threshold);

struct CurationEntry {
  std::string topic;
  std::string canonical;
  std::vector<std::string> accept;
  std::vector<std::string> reject;
  std::vector<std::string> add_manual;
  std::vector<std::string> add_morphological;

  bool operator==(const CurationEntry&) const = default;
};

using CurationFile = std::vector<CurationEntry>;

CurationFile load_curation(const std::filesystem::path& path);
CurationFile parse_curation(std::string_view json_text);
std::string curation_to_json(const CurationFile& curation);

/// Applies per-keyword overrides: `reject` drops embedding variants,
/// `accept` pins candidates (inserting them as Manual when absent), and the
/// add lists insert Manual/Morphological variants. Existing variants keep
/// their original provenance, which makes the operation idempotent.
Lexicon apply_curation(const Lexicon& lexicon, const CurationFile& curation);

struct ExpansionReport {
  std::string topic;
  std::string canonical;
  Expansion expansion;
  /// Accepted candidates dropped because a sibling group already holds them.
  std::vector<std::string> skipped_duplicates;
};

/// Runs expand_keyword over every group, honouring per-keyword `accept`
/// lists as the curator's recorded cutoff and `reject` lists as vetoes,
/// then applies the rest of the curation.
Lexicon expand_lexicon(const Lexicon& base, const EmbeddingTable& table, const CurationFile& curation,
                       std::size_t candidate_k, double threshold, std::vector<ExpansionReport>* report = nullptr);

}  // namespace laip
