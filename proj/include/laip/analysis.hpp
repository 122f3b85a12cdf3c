#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laip/corpus.hpp"
#include "laip/lexicon.hpp"
#include "laip/stats.hpp"
#include "laip/text.hpp"

namespace laip {

struct MatchRecord {
  std::string proposal_id;
  std::string item_id;
  std::string topic_name;
  std::string canonical;
  std::string variant;
  std::uint32_t count = 0;

  auto operator<=>(const MatchRecord&) const = default;
};

/// Counts non-overlapping occurrences of every variant in `tokens`. Each
/// group is scanned independently; at every position the longest matching
/// variant of the group wins and consumes its span. Records come back with
/// empty proposal/item ids, sorted by (topic, canonical, variant).
std::vector<MatchRecord> match_keywords(const TokenSequence& tokens, const Lexicon& lexicon);

/// Matches every item of the corpus; records are sorted by
/// (proposal_id, topic, canonical, variant, item_id).
std::vector<MatchRecord> match_corpus(const Corpus& corpus, const Lexicon& lexicon);

enum class Granularity { Topic, Keyword };

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view text);

class CoverageMatrix {
 public:
  CoverageMatrix() = default;
  CoverageMatrix(Granularity granularity, std::vector<std::string> rows, std::vector<std::string> columns);

  Granularity granularity() const noexcept { return granularity_; }
  const std::vector<std::string>& row_ids() const noexcept { return rows_; }
  const std::vector<std::string>& column_ids() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t columns() const noexcept { return columns_.size(); }

  std::uint32_t at(std::size_t row, std::size_t col) const { return cells_.at(row * columns_.size() + col); }
  std::uint32_t& at(std::size_t row, std::size_t col) { return cells_.at(row * columns_.size() + col); }

  std::optional<std::size_t> row_index(std::string_view id) const;
  std::optional<std::size_t> column_index(std::string_view id) const;

  /// Number of columns with a count of at least one.
  std::size_t covered(std::size_t row) const;
  std::uint64_t row_sum(std::size_t row) const;
  std::size_t nonzero_cells() const;

  bool operator==(const CoverageMatrix&) const = default;

 private:
  Granularity granularity_ = Granularity::Topic;
  std::vector<std::string> rows_;
  std::vector<std::string> columns_;
  std::vector<std::uint32_t> cells_;
};

/// Occurrence counts over title and explanatory text of every item.
/// Topic columns are topic names; keyword columns are canonical keywords.
CoverageMatrix compute_coverage(const Corpus& corpus, const Lexicon& lexicon, Granularity granularity);

/// Sums keyword columns into their owning topics.
CoverageMatrix aggregate_by_topic(const CoverageMatrix& keyword_matrix, const Lexicon& lexicon);

/// Fraction of topic columns with a nonzero count.
double topic_coverage_percent(const CoverageMatrix& topic_matrix, std::string_view proposal_id);

struct RankingEntry {
  std::string proposal_id;
  std::size_t score = 0;
  std::size_t rank = 0;

  bool operator==(const RankingEntry&) const = default;
};

/// Competition ranking by the number of covered columns ("1224" style);
/// ties are listed by proposal id.
std::vector<RankingEntry> rank_proposals(const CoverageMatrix& matrix);

struct GroupStats {
  double mean = 0.0;
  /// s / sqrt(n); std::nullopt when n < 2.
  std::optional<double> standard_error;
  std::size_t n = 0;
  /// The same two numbers over counts per 1000 tokens.
  double mean_per_1000_tokens = 0.0;
  std::optional<double> standard_error_per_1000_tokens;
};

struct PairTest {
  PublisherType a = PublisherType::AcademiaNgo;
  PublisherType b = PublisherType::Government;
  bool available = false;
  WelchResult result;
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.05;

struct GroupComparison {
  std::string topic_name;
  std::array<GroupStats, 3> groups;
  /// (academia_ngo, government), (academia_ngo, industry), (government, industry).
  std::array<PairTest, 3> tests;

  const GroupStats& operator[](PublisherType t) const { return groups[static_cast<std::size_t>(t)]; }
};

std::vector<GroupComparison> compare_groups(const CoverageMatrix& topic_matrix, const Corpus& corpus);

/// Total token count of every proposal, in corpus order.
std::vector<std::size_t> proposal_token_counts(const Corpus& corpus);

// --- export formats -------------------------------------------------------

std::string format_real(double value);

std::string matrix_to_csv(const CoverageMatrix& matrix);
CoverageMatrix matrix_from_csv(std::string_view csv, Granularity granularity);
std::string ranking_to_csv(const std::vector<RankingEntry>& ranking);
std::string groups_to_json(const std::vector<GroupComparison>& groups);
std::string groups_to_csv(const std::vector<GroupComparison>& groups);
std::string group_tests_to_csv(const std::vector<GroupComparison>& groups);

}  // namespace laip
