#include "laip/corpus.hpp"

#include <cctype>
#include <set>

#include "json_util.hpp"
#include "laip/error.hpp"

namespace laip {

using detail::json;

std::string_view to_string(PublisherType type) {
  switch (type) {
    case PublisherType::AcademiaNgo: return "academia_ngo";
    case PublisherType::Government: return "government";
    case PublisherType::Industry: return "industry";
  }
  return "unknown";
}

std::optional<PublisherType> parse_publisher_type(std::string_view text) {
  for (auto t : kPublisherTypes)
    if (to_string(t) == text) return t;
  return std::nullopt;
}

std::string PrincipleItem::full_text() const {
  if (explanatory_text.empty()) return title_text;
  return title_text + "\n" + explanatory_text;
}

namespace {

bool is_slug(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-')) return false;
  return true;
}

bool has_visible_char(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return true;
  return false;
}

}  // namespace

Corpus::Corpus(std::vector<Proposal> proposals) : proposals_(std::move(proposals)) {
  if (proposals_.empty()) throw ValidationError("empty corpus");
  std::set<std::string_view> ids;
  for (const auto& p : proposals_) {
    const std::string where = "proposal '" + p.id + "'";
    if (!is_slug(p.id)) throw ValidationError(where + ": id must match [a-z0-9-]+");
    if (!ids.insert(p.id).second) throw ValidationError(where + ": duplicate id");
    if (p.items.empty()) throw ValidationError(where + ": no items");
    if (p.year < 1900 || p.year > 2100) throw ValidationError(where + ": implausible year");
    std::set<std::string_view> item_ids;
    for (const auto& item : p.items) {
      if (item.item_id.empty()) throw ValidationError(where + ": empty item_id");
      if (!item_ids.insert(item.item_id).second)
        throw ValidationError(where + ": duplicate item_id '" + item.item_id + "'");
      if (!has_visible_char(item.title_text))
        throw ValidationError(where + ": item '" + item.item_id + "' has a blank title_text");
    }
  }
}

const Proposal* Corpus::find(std::string_view id) const {
  for (const auto& p : proposals_)
    if (p.id == id) return &p;
  return nullptr;
}

const Proposal& Corpus::at(std::string_view id) const {
  if (const Proposal* p = find(id)) return *p;
  throw NotFoundError("unknown proposal '" + std::string(id) + "'");
}

Corpus parse_corpus(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "corpus");
  detail::expect_object(root, "corpus", {"proposals"});
  const json& list = detail::require(root, "proposals", "corpus");
  if (!list.is_array()) throw ValidationError("corpus: 'proposals' must be an array");

  std::vector<Proposal> proposals;
  for (const json& jp : list) {
    Proposal p;
    const std::string where = "proposal #" + std::to_string(proposals.size() + 1);
    detail::expect_object(jp, where,
                          {"id", "title", "publisher", "publisher_type", "year", "source_url", "items"});
    p.id = detail::require_string(jp, "id", where);
    const std::string named = "proposal '" + p.id + "'";
    p.title = detail::require_string(jp, "title", named);
    p.publisher = detail::require_string(jp, "publisher", named);
    const auto type = parse_publisher_type(detail::require_string(jp, "publisher_type", named));
    if (!type) throw ValidationError(named + ": unknown publisher_type");
    p.publisher_type = *type;
    const json& year = detail::require(jp, "year", named);
    if (!year.is_number_integer()) throw ValidationError(named + ": year must be an integer");
    p.year = year.get<int>();
    p.source_url = detail::require_string(jp, "source_url", named);
    const json& items = detail::require(jp, "items", named);
    if (!items.is_array()) throw ValidationError(named + ": 'items' must be an array");
    for (const json& ji : items) {
      detail::expect_object(ji, named + " item", {"item_id", "title_text", "explanatory_text"});
      PrincipleItem item;
      item.item_id = detail::require_string(ji, "item_id", named);
      item.title_text = detail::require_string(ji, "title_text", named);
      item.explanatory_text = detail::require_string(ji, "explanatory_text", named);
      p.items.push_back(std::move(item));
    }
    proposals.push_back(std::move(p));
  }
  return Corpus(std::move(proposals));
}

Corpus load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("corpus file not found: " + path.string());
  return parse_corpus(detail::read_file(path));
}

std::string corpus_to_json(const Corpus& corpus) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& p : corpus.proposals()) {
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& i : p.items)
      items.push_back({{"item_id", i.item_id}, {"title_text", i.title_text},
                       {"explanatory_text", i.explanatory_text}});
    list.push_back({{"id", p.id},
                    {"title", p.title},
                    {"publisher", p.publisher},
                    {"publisher_type", to_string(p.publisher_type)},
                    {"year", p.year},
                    {"source_url", p.source_url},
                    {"items", std::move(items)}});
  }
  return nlohmann::ordered_json{{"proposals", std::move(list)}}.dump(1);
}

PublisherGroups group_by_publisher(const Corpus& corpus) {
  PublisherGroups out;
  for (const auto& p : corpus.proposals())
    out.groups[static_cast<std::size_t>(p.publisher_type)].push_back(&p);
  return out;
}

}  // namespace laip
