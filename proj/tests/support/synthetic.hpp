#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace synth {

struct RawTable {
  std::size_t dim = 0;
  std::vector<std::string> words;
  std::vector<float> rows;  // row-major
};

/// `n` random Gaussian rows named w0000.. . Every tenth row is an exact
/// power-of-two multiple of an earlier row, so cosine ties occur.
RawTable random_table(std::size_t n, std::size_t dim, std::uint32_t seed);

/// Writes the word2vec binary layout by hand (header, word, space, LE floats, LF).
void write_word2vec_binary(const RawTable& table, const std::filesystem::path& path);
void write_word2vec_text(const RawTable& table, const std::filesystem::path& path);

/// Random samples for the statistics oracle.
std::vector<std::pair<std::vector<double>, std::vector<double>>> sample_pairs(std::size_t count, std::uint32_t seed);

/// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace synth
