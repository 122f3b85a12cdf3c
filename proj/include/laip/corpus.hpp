#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laip {

enum class PublisherType { AcademiaNgo, Government, Industry };

inline constexpr std::array<PublisherType, 3> kPublisherTypes = {
    PublisherType::AcademiaNgo, PublisherType::Government, PublisherType::Industry};

std::string_view to_string(PublisherType type);
std::optional<PublisherType> parse_publisher_type(std::string_view text);

struct PrincipleItem {
  std::string item_id;
  std::string title_text;
  std::string explanatory_text;

  /// Title and explanation joined; this is what matching and embedding see.
  std::string full_text() const;

  bool operator==(const PrincipleItem&) const = default;
};

struct Proposal {
  std::string id;
  std::string title;
  std::string publisher;
  PublisherType publisher_type = PublisherType::AcademiaNgo;
  int year = 0;
  std::string source_url;
  std::vector<PrincipleItem> items;

  bool operator==(const Proposal&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  /// Validates every invariant; throws ValidationError naming the proposal.
  explicit Corpus(std::vector<Proposal> proposals);

  const std::vector<Proposal>& proposals() const noexcept { return proposals_; }
  std::size_t size() const noexcept { return proposals_.size(); }

  const Proposal* find(std::string_view id) const;
  const Proposal& at(std::string_view id) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Proposal> proposals_;
};

Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view json_text);
std::string corpus_to_json(const Corpus& corpus);

struct PublisherGroups {
  std::array<std::vector<const Proposal*>, 3> groups;

  const std::vector<const Proposal*>& operator[](PublisherType type) const {
    return groups[static_cast<std::size_t>(type)];
  }
};

PublisherGroups group_by_publisher(const Corpus& corpus);

}  // namespace laip
