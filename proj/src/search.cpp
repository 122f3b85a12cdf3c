#include "laip/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "json_util.hpp"
#include "laip/error.hpp"
#include "laip/text.hpp"

namespace laip {

namespace {

void sort_hits(std::vector<SearchHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.proposal_id, a.item_id) < std::tie(b.proposal_id, b.item_id);
  });
}

std::uint32_t count_ngram(const TokenSequence& tokens, const TokenSequence& pattern) {
  std::uint32_t n = 0;
  for (std::size_t i = 0; i + pattern.size() <= tokens.size();) {
    if (std::equal(pattern.begin(), pattern.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++n;
      i += pattern.size();
    } else {
      ++i;
    }
  }
  return n;
}

}  // namespace

KeywordSearchResult keyword_search(std::string_view query, const Corpus& corpus, const Lexicon& lexicon,
                                   const CoverageMatrix& keyword_matrix) {
  KeywordSearchResult out;
  const TokenSequence q = tokenize(query);
  if (q.empty()) return out;

  for (const auto& t : lexicon.topics())
    for (const auto& g : t.groups)
      if (std::any_of(g.variants.begin(), g.variants.end(), [&](const Variant& v) { return v.tokens == q; }))
        out.resolved.push_back({t.name, g.canonical});
  if (out.resolved.empty()) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& rec : match_keywords(q, lexicon))
      if (seen.emplace(rec.topic_name, rec.canonical).second) out.resolved.push_back({rec.topic_name, rec.canonical});
  }

  if (out.resolved.empty()) {
    out.literal = true;
    for (const auto& p : corpus.proposals())
      for (const auto& item : p.items)
        if (auto n = count_ngram(tokenize(item.full_text()), q))
          out.hits.push_back({p.id, item.item_id, static_cast<double>(n), item.title_text});
    sort_hits(out.hits);
    return out;
  }

  std::vector<std::size_t> cols;
  std::set<std::string> wanted;
  for (const auto& r : out.resolved) {
    wanted.insert(r.canonical);
    if (auto c = keyword_matrix.column_index(r.canonical)) cols.push_back(*c);
  }
  for (const auto& p : corpus.proposals()) {
    const auto row = keyword_matrix.row_index(p.id);
    if (!row) continue;
    if (std::none_of(cols.begin(), cols.end(), [&](std::size_t c) { return keyword_matrix.at(*row, c) > 0; })) continue;
    for (const auto& item : p.items) {
      std::uint32_t n = 0;
      for (const auto& rec : match_keywords(tokenize(item.full_text()), lexicon))
        if (wanted.count(rec.canonical)) n += rec.count;
      if (n) out.hits.push_back({p.id, item.item_id, static_cast<double>(n), item.title_text});
    }
  }
  sort_hits(out.hits);
  return out;
}

IdfWeights compute_idf(const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> df;
  std::size_t n = 0;
  for (const auto& p : corpus.proposals())
    for (const auto& item : p.items) {
      ++n;
      const auto toks = tokenize(item.full_text());
      for (const auto& t : std::set<std::string>(toks.begin(), toks.end())) ++df[t];
    }
  IdfWeights out;
  for (const auto& [t, d] : df) out[t] = std::log(static_cast<double>(n) / static_cast<double>(d));
  return out;
}

namespace {

// Returns the number of in-vocabulary tokens; `sum` receives the weighted
// vector sum and `weight` the total weight.
std::uint32_t accumulate(std::string_view text, const EmbeddingTable& table, const IdfWeights* idf,
                         std::vector<double>& sum, double& weight) {
  sum.assign(table.dim(), 0.0);
  weight = 0.0;
  std::uint32_t hits = 0;
  for (const auto& tok : tokenize(text)) {
    const auto row = table.find(tok);
    if (!row) continue;
    double w = 1.0;
    if (idf) {
      if (auto it = idf->find(tok); it != idf->end()) w = it->second;
    }
    const auto v = table.vector(*row);
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += w * static_cast<double>(v[i]);
    weight += w;
    ++hits;
  }
  return hits;
}

}  // namespace

std::vector<double> embed_paragraph(std::string_view text, const EmbeddingTable& table, const IdfWeights* idf) {
  std::vector<double> sum;
  double weight = 0.0;
  if (accumulate(text, table, idf, sum, weight) == 0) throw ValidationError("text has no in-vocabulary tokens");
  if (weight == 0.0) throw ValidationError("text has zero total token weight");
  for (double& x : sum) x /= weight;
  double norm = 0.0;
  for (double x : sum) norm += x * x;
  if (norm == 0.0) throw ValidationError("text embeds to the zero vector");
  return sum;
}

ItemEmbeddingIndex::ItemEmbeddingIndex(std::size_t dim, std::vector<IndexEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.vector.size() != dim_) throw ValidationError("index entry dimension mismatch");
    double n = 0.0;
    for (float x : e.vector) n += static_cast<double>(x) * x;
    if (!(n > 0.0)) throw ValidationError("index entry with zero norm");
  }
}

ItemEmbeddingIndex build_index(const Corpus& corpus, const EmbeddingTable& table, const IdfWeights* idf) {
  std::vector<IndexEntry> entries;
  for (const auto& p : corpus.proposals())
    for (const auto& item : p.items) {
      std::vector<double> sum;
      double weight = 0.0;
      const auto hits = accumulate(item.full_text(), table, idf, sum, weight);
      if (hits == 0 || weight == 0.0) continue;
      IndexEntry e{p.id, item.item_id, {}, hits};
      double norm = 0.0;
      for (double x : sum) {
        e.vector.push_back(static_cast<float>(x / weight));
        norm += e.vector.back() * static_cast<double>(e.vector.back());
      }
      if (norm > 0.0) entries.push_back(std::move(e));
    }
  return ItemEmbeddingIndex(table.dim(), std::move(entries));
}

namespace {

constexpr char kMagic[8] = {'L', 'A', 'I', 'P', 'I', 'D', 'X', '1'};
constexpr std::size_t kProposalField = 64;
constexpr std::size_t kItemField = 32;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void put_fixed(std::string& out, std::string_view s, std::size_t width) {
  if (s.size() >= width) throw ValidationError("id too long for index record: '" + std::string(s) + "'");
  out.append(s);
  out.append(width - s.size(), '\0');
}

std::string get_fixed(std::string_view in, std::size_t at, std::size_t width) {
  std::string_view f = in.substr(at, width);
  return std::string(f.substr(0, f.find('\0')));
}

}  // namespace

void save_index(const ItemEmbeddingIndex& index, const std::filesystem::path& path) {
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(index.dim()));
  put_u32(out, static_cast<std::uint32_t>(index.size()));
  for (const auto& e : index.entries()) {
    put_fixed(out, e.proposal_id, kProposalField);
    put_fixed(out, e.item_id, kItemField);
    put_u32(out, e.token_hits);
    for (float x : e.vector) {
      std::uint32_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      put_u32(out, bits);
    }
  }
  detail::write_file(path, out);
}

ItemEmbeddingIndex load_index(const std::filesystem::path& path) {
  const std::string in = detail::read_file(path);
  if (in.size() < 16 || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0)
    throw ParseError("not an item index file (bad magic)");
  const std::uint32_t dim = get_u32(in, 8), count = get_u32(in, 12);
  if (dim == 0) throw ParseError("item index has zero dimension");
  const std::size_t record = kProposalField + kItemField + 4 + 4 * static_cast<std::size_t>(dim);
  if (in.size() != 16 + record * count) throw ParseError("item index size does not match its header");
  std::vector<IndexEntry> entries;
  entries.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t at = 16 + r * record;
    IndexEntry e;
    e.proposal_id = get_fixed(in, at, kProposalField);
    e.item_id = get_fixed(in, at + kProposalField, kItemField);
    e.token_hits = get_u32(in, at + kProposalField + kItemField);
    e.vector.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint32_t bits = get_u32(in, at + kProposalField + kItemField + 4 + 4 * i);
      std::memcpy(&e.vector[i], &bits, sizeof bits);
    }
    entries.push_back(std::move(e));
  }
  return ItemEmbeddingIndex(dim, std::move(entries));
}

std::vector<SearchHit> paragraph_search(std::string_view query_text, const ItemEmbeddingIndex& index,
                                        const EmbeddingTable& table, const Corpus& corpus, std::size_t k,
                                        const IdfWeights* idf) {
  if (k == 0) throw ValidationError("k must be positive");
  if (index.dim() != table.dim() && index.size() > 0) throw ValidationError("index and embedding table dimensions differ");
  const std::vector<double> q = embed_paragraph(query_text, table, idf);
  std::vector<SearchHit> hits;
  hits.reserve(index.size());
  std::vector<double> v(table.dim());
  for (const auto& e : index.entries()) {
    std::copy(e.vector.begin(), e.vector.end(), v.begin());
    const Proposal* p = corpus.find(e.proposal_id);
    std::string snippet;
    if (p)
      for (const auto& item : p->items)
        if (item.item_id == e.item_id) snippet = item.title_text;
    hits.push_back({e.proposal_id, e.item_id, cosine_similarity(std::span<const double>(q), std::span<const double>(v)),
                    std::move(snippet)});
  }
  sort_hits(hits);
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace laip
