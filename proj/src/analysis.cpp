#include "laip/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json_util.hpp"
#include "laip/error.hpp"

namespace laip {

namespace {

bool matches_at(const TokenSequence& tokens, std::size_t pos, const TokenSequence& pattern) {
  if (pattern.empty() || pos + pattern.size() > tokens.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos));
}

}  // namespace

std::vector<MatchRecord> match_keywords(const TokenSequence& tokens, const Lexicon& lexicon) {
  std::vector<MatchRecord> out;
  for (const auto& topic : lexicon.topics()) {
    for (const auto& group : topic.groups) {
      std::vector<std::uint32_t> counts(group.variants.size(), 0);
      for (std::size_t i = 0; i < tokens.size();) {
        std::size_t best = group.variants.size();
        std::size_t best_len = 0;
        for (std::size_t v = 0; v < group.variants.size(); ++v) {
          const auto& pat = group.variants[v].tokens;
          if (pat.size() > best_len && matches_at(tokens, i, pat)) {
            best = v;
            best_len = pat.size();
          }
        }
        if (best_len == 0) {
          ++i;
        } else {
          ++counts[best];
          i += best_len;
        }
      }
      for (std::size_t v = 0; v < counts.size(); ++v)
        if (counts[v]) out.push_back({"", "", topic.name, group.canonical, group.variants[v].text, counts[v]});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatchRecord> match_corpus(const Corpus& corpus, const Lexicon& lexicon) {
  std::vector<MatchRecord> out;
  for (const auto& p : corpus.proposals()) {
    for (const auto& item : p.items) {
      for (auto& rec : match_keywords(tokenize(item.full_text()), lexicon)) {
        rec.proposal_id = p.id;
        rec.item_id = item.item_id;
        out.push_back(std::move(rec));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const MatchRecord& a, const MatchRecord& b) {
    return std::tie(a.proposal_id, a.topic_name, a.canonical, a.variant, a.item_id) <
           std::tie(b.proposal_id, b.topic_name, b.canonical, b.variant, b.item_id);
  });
  return out;
}

std::string_view to_string(Granularity g) { return g == Granularity::Topic ? "topic" : "keyword"; }

std::optional<Granularity> parse_granularity(std::string_view text) {
  if (text == "topic") return Granularity::Topic;
  if (text == "keyword") return Granularity::Keyword;
  return std::nullopt;
}

CoverageMatrix::CoverageMatrix(Granularity granularity, std::vector<std::string> rows,
                               std::vector<std::string> columns)
    : granularity_(granularity),
      rows_(std::move(rows)),
      columns_(std::move(columns)),
      cells_(rows_.size() * columns_.size(), 0) {}

std::optional<std::size_t> CoverageMatrix::row_index(std::string_view id) const {
  auto it = std::find(rows_.begin(), rows_.end(), id);
  if (it == rows_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - rows_.begin());
}

std::optional<std::size_t> CoverageMatrix::column_index(std::string_view id) const {
  auto it = std::find(columns_.begin(), columns_.end(), id);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::size_t CoverageMatrix::covered(std::size_t row) const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < columns(); ++c) n += at(row, c) > 0;
  return n;
}

std::uint64_t CoverageMatrix::row_sum(std::size_t row) const {
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < columns(); ++c) s += at(row, c);
  return s;
}

std::size_t CoverageMatrix::nonzero_cells() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](auto v) { return v > 0; }));
}

namespace {

std::vector<std::string> proposal_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const auto& p : corpus.proposals()) ids.push_back(p.id);
  return ids;
}

std::vector<std::string> keyword_columns(const Lexicon& lexicon) {
  std::vector<std::string> cols;
  for (const auto& t : lexicon.topics())
    for (const auto& g : t.groups) cols.push_back(g.canonical);
  return cols;
}

}  // namespace

CoverageMatrix aggregate_by_topic(const CoverageMatrix& keyword_matrix, const Lexicon& lexicon) {
  if (keyword_matrix.granularity() != Granularity::Keyword)
    throw ValidationError("aggregate_by_topic expects a keyword matrix");
  std::vector<std::string> topic_names;
  std::vector<std::size_t> owner;
  for (const auto& t : lexicon.topics()) {
    topic_names.push_back(t.name);
    for (std::size_t g = 0; g < t.groups.size(); ++g) owner.push_back(topic_names.size() - 1);
  }
  if (owner.size() != keyword_matrix.columns())
    throw ValidationError("keyword matrix does not match the lexicon");
  CoverageMatrix out(Granularity::Topic, keyword_matrix.row_ids(), std::move(topic_names));
  for (std::size_t r = 0; r < keyword_matrix.rows(); ++r)
    for (std::size_t c = 0; c < keyword_matrix.columns(); ++c) out.at(r, owner[c]) += keyword_matrix.at(r, c);
  return out;
}

CoverageMatrix compute_coverage(const Corpus& corpus, const Lexicon& lexicon, Granularity granularity) {
  CoverageMatrix kw(Granularity::Keyword, proposal_ids(corpus), keyword_columns(lexicon));
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < kw.columns(); ++c) col[kw.column_ids()[c]] = c;
  std::size_t row = 0;
  for (const auto& p : corpus.proposals()) {
    for (const auto& item : p.items)
      for (const auto& rec : match_keywords(tokenize(item.full_text()), lexicon))
        kw.at(row, col.at(rec.canonical)) += rec.count;
    ++row;
  }
  if (granularity == Granularity::Keyword) return kw;
  return aggregate_by_topic(kw, lexicon);
}

double topic_coverage_percent(const CoverageMatrix& topic_matrix, std::string_view proposal_id) {
  if (topic_matrix.granularity() != Granularity::Topic)
    throw ValidationError("topic_coverage_percent expects a topic matrix");
  const auto row = topic_matrix.row_index(proposal_id);
  if (!row) throw NotFoundError("unknown proposal '" + std::string(proposal_id) + "'");
  if (topic_matrix.columns() == 0) return 0.0;
  return static_cast<double>(topic_matrix.covered(*row)) / static_cast<double>(topic_matrix.columns());
}

std::vector<RankingEntry> rank_proposals(const CoverageMatrix& matrix) {
  std::vector<RankingEntry> out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) out.push_back({matrix.row_ids()[r], matrix.covered(r), 0});
  std::sort(out.begin(), out.end(), [](const RankingEntry& a, const RankingEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.proposal_id < b.proposal_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].rank = (i > 0 && out[i].score == out[i - 1].score) ? out[i - 1].rank : i + 1;
  return out;
}

std::vector<std::size_t> proposal_token_counts(const Corpus& corpus) {
  std::vector<std::size_t> out;
  for (const auto& p : corpus.proposals()) {
    std::size_t n = 0;
    for (const auto& item : p.items) n += tokenize(item.full_text()).size();
    out.push_back(n);
  }
  return out;
}

namespace {

constexpr std::array<std::pair<PublisherType, PublisherType>, 3> kPairs = {{
    {PublisherType::AcademiaNgo, PublisherType::Government},
    {PublisherType::AcademiaNgo, PublisherType::Industry},
    {PublisherType::Government, PublisherType::Industry},
}};

std::optional<double> standard_error(const SampleSummary& s) {
  if (s.n < 2) return std::nullopt;
  return std::sqrt(s.variance) / std::sqrt(static_cast<double>(s.n));
}

}  // namespace

std::vector<GroupComparison> compare_groups(const CoverageMatrix& topic_matrix, const Corpus& corpus) {
  if (topic_matrix.granularity() != Granularity::Topic)
    throw ValidationError("compare_groups expects a topic matrix");
  const auto tokens = proposal_token_counts(corpus);
  std::vector<GroupComparison> out;
  for (std::size_t c = 0; c < topic_matrix.columns(); ++c) {
    GroupComparison gc;
    gc.topic_name = topic_matrix.column_ids()[c];
    std::array<std::vector<double>, 3> raw, normalized;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Proposal& p = corpus.proposals()[i];
      const auto row = topic_matrix.row_index(p.id);
      if (!row) throw ValidationError("topic matrix lacks proposal '" + p.id + "'");
      const double count = topic_matrix.at(*row, c);
      const auto g = static_cast<std::size_t>(p.publisher_type);
      raw[g].push_back(count);
      normalized[g].push_back(tokens[i] ? 1000.0 * count / static_cast<double>(tokens[i]) : 0.0);
    }
    for (std::size_t g = 0; g < 3; ++g) {
      const auto s = summarize(raw[g]);
      const auto sn = summarize(normalized[g]);
      gc.groups[g] = {s.mean, standard_error(s), s.n, sn.mean, standard_error(sn)};
    }
    for (std::size_t k = 0; k < kPairs.size(); ++k) {
      PairTest& pt = gc.tests[k];
      pt.a = kPairs[k].first;
      pt.b = kPairs[k].second;
      const auto& sa = raw[static_cast<std::size_t>(pt.a)];
      const auto& sb = raw[static_cast<std::size_t>(pt.b)];
      pt.available = sa.size() >= 2 && sb.size() >= 2;
      if (pt.available) {
        pt.result = welch_t_test(sa, sb);
        pt.significant = pt.result.p < kSignificanceLevel;
      }
    }
    out.push_back(std::move(gc));
  }
  return out;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field", line_no, line.size());
  out.push_back(std::move(cur));
  return out;
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string("n/a"); }

nlohmann::ordered_json json_real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json json_real(const std::optional<double>& v) {
  if (!v) return nullptr;
  return json_real(*v);
}

}  // namespace

std::string matrix_to_csv(const CoverageMatrix& matrix) {
  std::string out = "proposal_id";
  for (const auto& c : matrix.column_ids()) out += "," + csv_field(c);
  out += "\n";
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += csv_field(matrix.row_ids()[r]);
    for (std::size_t c = 0; c < matrix.columns(); ++c) out += "," + std::to_string(matrix.at(r, c));
    out += "\n";
  }
  return out;
}

CoverageMatrix matrix_from_csv(std::string_view csv, Granularity granularity) {
  std::vector<std::vector<std::string>> lines;
  std::size_t start = 0, line_no = 1;
  while (start < csv.size()) {
    auto nl = csv.find('\n', start);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(csv_split(line, line_no));
    start = nl + 1;
    ++line_no;
  }
  if (lines.empty() || lines[0].empty() || lines[0][0] != "proposal_id")
    throw ParseError("matrix CSV must start with a 'proposal_id' header", 1, 1);
  std::vector<std::string> cols(lines[0].begin() + 1, lines[0].end());
  std::vector<std::string> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) rows.push_back(lines[i].at(0));
  CoverageMatrix m(granularity, rows, cols);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != cols.size() + 1) throw ParseError("wrong number of CSV fields", i + 1, 1);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& f = lines[i][c + 1];
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || f.empty() || f[0] == '-') throw ParseError("non-integer CSV cell '" + f + "'", i + 1, c + 2);
      m.at(i - 1, c) = static_cast<std::uint32_t>(v);
    }
  }
  return m;
}

std::string ranking_to_csv(const std::vector<RankingEntry>& ranking) {
  std::string out = "rank,proposal_id,score\n";
  for (const auto& e : ranking)
    out += std::to_string(e.rank) + "," + csv_field(e.proposal_id) + "," + std::to_string(e.score) + "\n";
  return out;
}

std::string groups_to_json(const std::vector<GroupComparison>& groups) {
  using ojson = nlohmann::ordered_json;
  ojson out = ojson::array();
  for (const auto& gc : groups) {
    ojson jg = ojson::object();
    for (auto t : kPublisherTypes) {
      const GroupStats& s = gc[t];
      jg[std::string(to_string(t))] = ojson{{"mean", json_real(s.mean)},
                                            {"standard_error", json_real(s.standard_error)},
                                            {"n", s.n},
                                            {"mean_per_1000_tokens", json_real(s.mean_per_1000_tokens)},
                                            {"standard_error_per_1000_tokens",
                                             json_real(s.standard_error_per_1000_tokens)}};
    }
    ojson jt = ojson::array();
    for (const auto& pt : gc.tests) {
      ojson j{{"a", to_string(pt.a)}, {"b", to_string(pt.b)}, {"available", pt.available}};
      if (pt.available) {
        j["t"] = json_real(pt.result.t);
        j["df"] = json_real(pt.result.df);
        j["p"] = json_real(pt.result.p);
        j["significant"] = pt.significant;
        j["degenerate"] = pt.result.degenerate;
      } else {
        j["t"] = nullptr;
        j["df"] = nullptr;
        j["p"] = nullptr;
        j["significant"] = false;
        j["degenerate"] = false;
      }
      jt.push_back(std::move(j));
    }
    out.push_back(ojson{{"topic_name", gc.topic_name}, {"groups", std::move(jg)}, {"tests", std::move(jt)}});
  }
  return out.dump(1) + "\n";
}

std::string groups_to_csv(const std::vector<GroupComparison>& groups) {
  std::string out = "topic_name,publisher_type,n,mean,standard_error,mean_per_1000_tokens,standard_error_per_1000_tokens\n";
  for (const auto& gc : groups)
    for (auto t : kPublisherTypes) {
      const GroupStats& s = gc[t];
      out += csv_field(gc.topic_name) + "," + std::string(to_string(t)) + "," + std::to_string(s.n) + "," +
             format_real(s.mean) + "," + optional_real(s.standard_error) + "," + format_real(s.mean_per_1000_tokens) +
             "," + optional_real(s.standard_error_per_1000_tokens) + "\n";
    }
  return out;
}

std::string group_tests_to_csv(const std::vector<GroupComparison>& groups) {
  std::string out = "topic_name,a,b,available,t,df,p,significant\n";
  for (const auto& gc : groups)
    for (const auto& pt : gc.tests) {
      out += csv_field(gc.topic_name) + "," + std::string(to_string(pt.a)) + "," + std::string(to_string(pt.b)) + "," +
             (pt.available ? "true" : "false") + ",";
      if (pt.available)
        out += format_real(pt.result.t) + "," + format_real(pt.result.df) + "," + format_real(pt.result.p) + "," +
               (pt.significant ? "true" : "false");
      else
        out += "n/a,n/a,n/a,n/a";
      out += "\n";
    }
  return out;
}

}  // namespace laip
