#include "synthetic.hpp"

#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace synth {

RawTable random_table(std::size_t n, std::size_t dim, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  RawTable t;
  t.dim = dim;
  t.rows.resize(n * dim);
  for (std::size_t r = 0; r < n; ++r) {
    char name[32];
    std::snprintf(name, sizeof name, "w%04zu", r);
    t.words.emplace_back(name);
    float* row = t.rows.data() + r * dim;
    if (r >= 10 && r % 10 == 0) {
      const std::size_t src = std::uniform_int_distribution<std::size_t>(0, r - 1)(rng);
      const float scale = (r / 10) % 2 ? 2.0f : 0.5f;
      for (std::size_t i = 0; i < dim; ++i) row[i] = t.rows[src * dim + i] * scale;
    } else {
      for (std::size_t i = 0; i < dim; ++i) row[i] = normal(rng);
    }
  }
  return t;
}

void write_word2vec_binary(const RawTable& table, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary);
  out << table.words.size() << ' ' << table.dim << '\n';
  for (std::size_t r = 0; r < table.words.size(); ++r) {
    out << table.words[r] << ' ';
    out.write(reinterpret_cast<const char*>(table.rows.data() + r * table.dim),
              static_cast<std::streamsize>(table.dim * sizeof(float)));
    out << '\n';
  }
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_word2vec_text(const RawTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << table.words.size() << ' ' << table.dim << '\n';
  char buf[32];
  for (std::size_t r = 0; r < table.words.size(); ++r) {
    out << table.words[r];
    for (std::size_t i = 0; i < table.dim; ++i) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(table.rows[r * table.dim + i]));
      out << buf;
    }
    out << '\n';
  }
}

std::vector<std::pair<std::vector<double>, std::vector<double>>> sample_pairs(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_real_distribution<double> loc(-5, 5), spread(0.1, 4);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::normal_distribution<double> da(loc(rng), spread(rng)), db(loc(rng), spread(rng));
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& x : a) x = da(rng);
    for (auto& x : b) x = db(rng);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("laip-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace synth
