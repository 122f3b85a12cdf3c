#include "laip/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>

#include "json_util.hpp"
#include "laip/error.hpp"
#include "laip/text.hpp"

namespace laip {

static_assert(std::endian::native == std::endian::little, "binary embedding reader assumes little-endian");

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view text) {
  if (text == "text") return EmbeddingFormat::Text;
  if (text == "binary") return EmbeddingFormat::Binary;
  return std::nullopt;
}

namespace {

double squared_norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return s;
}

double dot(std::span<const float> u, std::span<const float> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return s;
}

bool all_finite(std::span<const float> v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

struct Cursor {
  std::string_view bytes;
  std::size_t pos = 0;
  std::size_t line = 1;

  bool done() const { return pos >= bytes.size(); }
  std::size_t column() const {
    const auto nl = bytes.rfind('\n', pos ? pos - 1 : 0);
    return nl == std::string_view::npos || pos == 0 ? pos + 1 : pos - nl;
  }
};

std::size_t parse_count(std::string_view field, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw ParseError(std::string("malformed header: bad ") + what, 1, 1);
  return value;
}

// "<count> <dim>\n"
std::pair<std::size_t, std::size_t> parse_header(Cursor& c) {
  const auto nl = c.bytes.find('\n');
  if (nl == std::string_view::npos) throw ParseError("malformed header: missing newline", 1, 1);
  std::string_view line = c.bytes.substr(0, nl);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto sp = line.find(' ');
  if (sp == std::string_view::npos) throw ParseError("malformed header: expected '<count> <dim>'", 1, 1);
  const std::size_t count = parse_count(line.substr(0, sp), "count");
  const std::size_t dim = parse_count(line.substr(sp + 1), "dimension");
  if (dim == 0) throw ParseError("malformed header: dimension must be positive", 1, sp + 2);
  c.pos = nl + 1;
  c.line = 2;
  return {count, dim};
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, std::vector<std::string> words, std::vector<float> components)
    : dim_(dim), words_(std::move(words)), data_(std::move(components)) {
  if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
  if (data_.size() != words_.size() * dim_) throw ValidationError("embedding component count does not match vocabulary");
  for (std::size_t r = 0; r < words_.size(); ++r) {
    auto v = vector(r);
    if (!all_finite(v)) throw ValidationError("non-finite component for '" + words_[r] + "'");
    if (squared_norm(v) == 0.0) throw ValidationError("zero-norm vector for '" + words_[r] + "'");
  }
  index_rows();
  if (index_.size() != words_.size()) throw ValidationError("duplicate word in embedding vocabulary");
}

void EmbeddingTable::index_rows() {
  norms_.resize(words_.size());
  index_.clear();
  folded_.clear();
  index_.reserve(words_.size());
  for (std::size_t r = 0; r < words_.size(); ++r) {
    norms_[r] = std::sqrt(squared_norm(vector(r)));
    index_.emplace(words_[r], r);
    folded_.emplace(to_lower(words_[r]), r);
  }
}

std::span<const float> EmbeddingTable::vector(std::size_t row) const {
  if (row >= words_.size()) throw NotFoundError("embedding row out of range");
  return {data_.data() + row * dim_, dim_};
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view word) const {
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  if (auto it = folded_.find(to_lower(word)); it != folded_.end()) return it->second;
  return std::nullopt;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                               std::optional<std::size_t> limit) {
  if (limit && *limit == 0) throw ValidationError("vocabulary limit must be positive");
  const std::string bytes = detail::read_file(path);
  Cursor c{bytes};
  const auto [count, dim] = parse_header(c);

  EmbeddingTable table;
  table.dim_ = dim;
  table.stats_.header_count = count;
  const std::size_t cap = limit ? std::min(count, *limit) : count;
  table.words_.reserve(cap);
  table.data_.reserve(cap * dim);

  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(cap);
  std::vector<float> row(dim);

  for (std::size_t rec = 0; rec < count && table.words_.size() < cap; ++rec) {
    if (c.done()) throw ParseError("truncated file: expected " + std::to_string(count) + " records, found " +
                                       std::to_string(rec),
                                   c.line, 1);
    std::string word;
    if (format == EmbeddingFormat::Text) {
      const auto nl = c.bytes.find('\n', c.pos);
      std::string_view line = c.bytes.substr(c.pos, nl == std::string_view::npos ? std::string_view::npos : nl - c.pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      const auto sp = line.find(' ');
      if (sp == std::string_view::npos || sp == 0)
        throw ParseError("malformed record: expected '<word> <components>'", c.line, 1);
      word.assign(line.substr(0, sp));
      const char* p = line.data() + sp + 1;
      const char* end = line.data() + line.size();
      std::size_t k = 0;
      while (p < end) {
        while (p < end && *p == ' ') ++p;
        if (p == end) break;
        if (k == dim) throw ParseError("dimensionality mismatch: more than " + std::to_string(dim) + " components",
                                       c.line, static_cast<std::size_t>(p - line.data()) + 1);
        auto [q, ec] = std::from_chars(p, end, row[k]);
        if (ec != std::errc{} || (q < end && *q != ' '))
          throw ParseError("malformed component", c.line, static_cast<std::size_t>(p - line.data()) + 1);
        p = q;
        ++k;
      }
      if (k != dim)
        throw ParseError("dimensionality mismatch: expected " + std::to_string(dim) + " components, found " +
                             std::to_string(k),
                         c.line, line.size() + 1);
      c.pos = nl == std::string_view::npos ? c.bytes.size() : nl + 1;
      ++c.line;
    } else {
      const auto sp = c.bytes.find(' ', c.pos);
      if (sp == std::string_view::npos) throw ParseError("truncated record: word not terminated", c.line, c.column());
      word.assign(c.bytes.substr(c.pos, sp - c.pos));
      if (word.empty()) throw ParseError("malformed record: empty word", c.line, c.column());
      c.pos = sp + 1;
      const std::size_t need = dim * sizeof(float);
      if (c.bytes.size() - c.pos < need)
        throw ParseError("truncated record for '" + word + "'", c.line, c.column());
      std::memcpy(row.data(), c.bytes.data() + c.pos, need);
      c.pos += need;
      if (c.pos < c.bytes.size() && c.bytes[c.pos] == '\n') {
        ++c.pos;
        ++c.line;
      }
    }

    if (!all_finite(row) || squared_norm(row) == 0.0) {
      ++table.stats_.zero_norm_skipped;
      continue;
    }
    if (!seen.emplace(word, table.words_.size()).second) {
      ++table.stats_.duplicates_skipped;
      continue;
    }
    table.words_.push_back(std::move(word));
    table.data_.insert(table.data_.end(), row.begin(), row.end());
  }
  table.index_rows();
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path, EmbeddingFormat format) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  char buf[32];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out += table.word(r);
    auto v = table.vector(r);
    if (format == EmbeddingFormat::Text) {
      for (float x : v) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
        out.push_back(' ');
        out.append(buf, p);
      }
    } else {
      out.push_back(' ');
      out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float));
    }
    out.push_back('\n');
  }
  detail::write_file(path, out);
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw ValidationError("cosine_similarity: length mismatch");
  const double nu = squared_norm(u), nv = squared_norm(v);
  if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine_similarity: zero-norm vector");
  return dot(u, v) / (std::sqrt(nu) * std::sqrt(nv));
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine_similarity: length mismatch");
  double d = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw ValidationError("cosine_similarity: zero-norm vector");
  return d / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<Neighbor> nearest_to_vector(const EmbeddingTable& table, std::span<const float> query, std::size_t k,
                                        std::optional<std::size_t> exclude_row) {
  if (k == 0) throw ValidationError("k must be positive");
  if (query.size() != table.dim()) throw ValidationError("query dimension mismatch");
  const double nq = std::sqrt(squared_norm(query));
  if (nq == 0.0) throw ValidationError("zero-norm query vector");

  std::vector<double> scores(table.size());
  std::vector<std::size_t> rows;
  rows.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (exclude_row && r == *exclude_row) continue;
    scores[r] = dot(query, table.vector(r)) / (nq * table.norm(r));
    rows.push_back(r);
  }
  const auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return table.word(a) < table.word(b);
  };
  const std::size_t take = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({table.word(rows[i]), scores[rows[i]]});
  return out;
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table, std::string_view word, std::size_t k) {
  const auto row = table.find(word);
  if (!row) throw NotFoundError("out-of-vocabulary word '" + std::string(word) + "'");
  return nearest_to_vector(table, table.vector(*row), k, *row);
}

}  // namespace laip
