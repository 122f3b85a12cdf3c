#include "laip/lexicon.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json_util.hpp"
#include "laip/error.hpp"

namespace laip {

using detail::json;

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Manual: return "manual";
    case Provenance::Morphological: return "morphological";
    case Provenance::Embedding: return "embedding";
  }
  return "unknown";
}

namespace {

std::optional<Provenance> parse_provenance(std::string_view s) {
  for (auto p : {Provenance::Manual, Provenance::Morphological, Provenance::Embedding})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// Surface forms are compared by their token sequence, which is exactly
// what the matcher sees.
std::string token_form(std::string_view text) { return join(tokenize(text), " "); }

}  // namespace

const Variant* KeywordGroup::find(std::string_view text) const {
  const std::string form = token_form(text);
  for (const auto& v : variants)
    if (join(v.tokens, " ") == form || v.text == text) return &v;
  return nullptr;
}

bool KeywordGroup::is_multiword() const { return canonical.find(' ') != std::string::npos; }

Lexicon::Lexicon(std::vector<Topic> topics) : topics_(std::move(topics)) {
  if (topics_.empty()) throw ValidationError("lexicon has no topics");
  std::set<std::string> topic_names, canonicals;
  for (auto& topic : topics_) {
    if (topic.name.empty()) throw ValidationError("topic with empty name");
    if (!topic_names.insert(topic.name).second) throw ValidationError("duplicate topic '" + topic.name + "'");
    if (topic.groups.empty()) throw ValidationError("topic '" + topic.name + "' has no keyword groups");
    std::map<std::string, std::string> seen;  // token form -> owning canonical
    for (auto& group : topic.groups) {
      const std::string where = "topic '" + topic.name + "', keyword '" + group.canonical + "'";
      if (group.canonical.empty() || to_lower(group.canonical) != group.canonical)
        throw ValidationError(where + ": canonical must be non-empty lowercase");
      if (!canonicals.insert(group.canonical).second)
        throw ValidationError(where + ": canonical keyword appears twice in the lexicon");
      auto canon = std::find_if(group.variants.begin(), group.variants.end(),
                                [&](const Variant& v) { return v.text == group.canonical; });
      if (canon == group.variants.end() || canon->provenance != Provenance::Manual)
        throw ValidationError(where + ": canonical must be listed as a manual variant");
      std::rotate(group.variants.begin(), canon, canon + 1);
      std::sort(group.variants.begin() + 1, group.variants.end(),
                [](const Variant& a, const Variant& b) { return a.text < b.text; });
      for (auto& v : group.variants) {
        if (v.text.empty() || to_lower(v.text) != v.text)
          throw ValidationError(where + ": variant '" + v.text + "' must be non-empty lowercase");
        if ((v.provenance == Provenance::Embedding) != v.similarity.has_value())
          throw ValidationError(where + ": similarity is required exactly for embedding variants");
        if (v.similarity && !(*v.similarity >= -1.0 - 1e-6 && *v.similarity <= 1.0 + 1e-6))
          throw ValidationError(where + ": similarity out of range");
        v.tokens = tokenize(v.text);
        if (v.tokens.empty()) throw ValidationError(where + ": variant '" + v.text + "' has no tokens");
        auto [it, fresh] = seen.emplace(join(v.tokens, " "), group.canonical);
        if (!fresh)
          throw ValidationError("topic '" + topic.name + "': duplicate variant '" + v.text + "' (in '" +
                                it->second + "' and '" + group.canonical + "')");
      }
    }
  }
}

const Topic* Lexicon::find_topic(std::string_view name) const {
  for (const auto& t : topics_)
    if (t.name == name) return &t;
  return nullptr;
}

const KeywordGroup* Lexicon::find_group(std::string_view topic, std::string_view canonical) const {
  const Topic* t = find_topic(topic);
  if (!t) return nullptr;
  for (const auto& g : t->groups)
    if (g.canonical == canonical) return &g;
  return nullptr;
}

std::size_t Lexicon::canonical_count() const {
  std::size_t n = 0;
  for (const auto& t : topics_) n += t.groups.size();
  return n;
}

std::size_t Lexicon::variant_count() const {
  std::size_t n = 0;
  for (const auto& t : topics_)
    for (const auto& g : t.groups) n += g.variants.size();
  return n;
}

std::vector<CrossTopicDuplicate> Lexicon::cross_topic_duplicates() const {
  std::map<std::string, std::string> first;
  std::vector<CrossTopicDuplicate> out;
  for (const auto& t : topics_) {
    std::set<std::string> local;
    for (const auto& g : t.groups)
      for (const auto& v : g.variants) {
        const std::string form = join(v.tokens, " ");
        if (!local.insert(form).second) continue;
        auto [it, fresh] = first.emplace(form, t.name);
        if (!fresh) out.push_back({v.text, it->second, t.name});
      }
  }
  return out;
}

Lexicon parse_lexicon(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "lexicon");
  detail::expect_object(root, "lexicon", {"topics"});
  const json& jtopics = detail::require(root, "topics", "lexicon");
  if (!jtopics.is_array()) throw ValidationError("lexicon: 'topics' must be an array");
  std::vector<Topic> topics;
  for (const json& jt : jtopics) {
    detail::expect_object(jt, "topic", {"name", "groups"});
    Topic topic;
    topic.name = detail::require_string(jt, "name", "topic");
    const std::string where = "topic '" + topic.name + "'";
    const json& jgroups = detail::require(jt, "groups", where);
    if (!jgroups.is_array()) throw ValidationError(where + ": 'groups' must be an array");
    for (const json& jg : jgroups) {
      detail::expect_object(jg, where + " group", {"canonical", "variants"});
      KeywordGroup group;
      group.canonical = detail::require_string(jg, "canonical", where);
      const json& jvars = detail::require(jg, "variants", where);
      if (!jvars.is_array()) throw ValidationError(where + ": 'variants' must be an array");
      for (const json& jv : jvars) {
        detail::expect_object(jv, where + " variant", {"text", "provenance", "similarity"});
        Variant v;
        v.text = detail::require_string(jv, "text", where);
        auto p = parse_provenance(detail::require_string(jv, "provenance", where));
        if (!p) throw ValidationError(where + ": unknown provenance for '" + v.text + "'");
        v.provenance = *p;
        if (auto it = jv.find("similarity"); it != jv.end()) {
          if (!it->is_number()) throw ValidationError(where + ": similarity must be a number");
          v.similarity = it->get<double>();
        }
        group.variants.push_back(std::move(v));
      }
      topic.groups.push_back(std::move(group));
    }
    topics.push_back(std::move(topic));
  }
  return Lexicon(std::move(topics));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("lexicon file not found: " + path.string());
  return parse_lexicon(detail::read_file(path));
}

std::string lexicon_to_json(const Lexicon& lexicon) {
  using ojson = nlohmann::ordered_json;
  ojson topics = ojson::array();
  for (const auto& t : lexicon.topics()) {
    ojson groups = ojson::array();
    for (const auto& g : t.groups) {
      ojson vars = ojson::array();
      for (const auto& v : g.variants) {
        ojson jv{{"text", v.text}, {"provenance", to_string(v.provenance)}};
        if (v.similarity) jv["similarity"] = *v.similarity;
        vars.push_back(std::move(jv));
      }
      groups.push_back({{"canonical", g.canonical}, {"variants", std::move(vars)}});
    }
    topics.push_back({{"name", t.name}, {"groups", std::move(groups)}});
  }
  return ojson{{"topics", std::move(topics)}}.dump(1) + "\n";
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  detail::write_file(path, lexicon_to_json(lexicon));
}

namespace {

template <class Keep>
std::vector<Variant> accept_candidates(const std::vector<Neighbor>& candidates, std::string_view canonical,
                                       Keep keep) {
  std::vector<Variant> accepted;
  std::set<std::string> forms{token_form(canonical)};
  for (const auto& n : candidates) {
    if (!keep(n)) continue;
    std::string text = n.word;
    std::replace(text.begin(), text.end(), '_', ' ');
    text = to_lower(text);
    const std::string form = token_form(text);
    if (form.empty() || !forms.insert(form).second) continue;
    accepted.push_back({std::move(text), Provenance::Embedding, n.score, {}});
  }
  return accepted;
}

Expansion candidates_for(const EmbeddingTable& table, std::string_view canonical, std::size_t candidate_k) {
  if (candidate_k == 0) throw ValidationError("candidate_k must be positive");
  Expansion e;
  if (canonical.find(' ') != std::string_view::npos) return e;
  if (!table.find(canonical)) {
    e.out_of_vocabulary = true;
    return e;
  }
  e.candidates = nearest_neighbors(table, canonical, candidate_k);
  return e;
}

}  // namespace

Expansion expand_keyword(const EmbeddingTable& table, std::string_view canonical, std::size_t candidate_k,
                         double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  Expansion e = candidates_for(table, canonical, candidate_k);
  e.accepted = accept_candidates(e.candidates, canonical, [&](const Neighbor& n) { return n.score >= threshold; });
  return e;
}

namespace {

json string_list(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return json::array();
  if (!it->is_array()) throw ValidationError(std::string(where) + ": '" + key + "' must be a list");
  for (const auto& s : *it)
    if (!s.is_string()) throw ValidationError(std::string(where) + ": '" + key + "' must hold strings");
  return *it;
}

std::vector<std::string> lowered(const json& list) {
  std::vector<std::string> out;
  for (const auto& s : list) out.push_back(to_lower(s.get<std::string>()));
  return out;
}

bool contains(const std::vector<std::string>& list, std::string_view text) {
  const std::string form = token_form(text);
  return std::any_of(list.begin(), list.end(), [&](const std::string& s) { return token_form(s) == form; });
}

KeywordGroup& group_ref(std::vector<Topic>& topics, const CurationEntry& e, Topic** owner) {
  for (auto& t : topics) {
    if (t.name != e.topic) continue;
    for (auto& g : t.groups)
      if (g.canonical == e.canonical) {
        *owner = &t;
        return g;
      }
  }
  throw NotFoundError("curation references unknown keyword '" + e.canonical + "' in topic '" + e.topic + "'");
}

const KeywordGroup* sibling_holding(const Topic& topic, const KeywordGroup& self, std::string_view text) {
  for (const auto& g : topic.groups)
    if (&g != &self && g.find(text)) return &g;
  return nullptr;
}

void insert_variant(Topic& topic, KeywordGroup& group, const std::string& text, Provenance p) {
  if (group.find(text)) return;
  if (const KeywordGroup* other = sibling_holding(topic, group, text))
    throw ValidationError("curation adds '" + text + "' to '" + group.canonical + "' but '" + other->canonical +
                          "' in topic '" + topic.name + "' already holds it");
  Variant v{text, p, std::nullopt, tokenize(text)};
  if (v.tokens.empty()) throw ValidationError("curation variant '" + text + "' has no tokens");
  group.variants.push_back(std::move(v));
}

}  // namespace

CurationFile parse_curation(std::string_view json_text) {
  const json root = detail::parse_json(json_text, "curation");
  if (!root.is_array()) throw ValidationError("curation: expected a list of entries");
  CurationFile out;
  for (const json& j : root) {
    detail::expect_object(j, "curation entry",
                          {"topic", "canonical", "accept", "reject", "add_manual", "add_morphological"});
    CurationEntry e;
    e.topic = detail::require_string(j, "topic", "curation entry");
    e.canonical = detail::require_string(j, "canonical", "curation entry");
    const std::string where = "curation entry '" + e.canonical + "'";
    e.accept = lowered(string_list(j, "accept", where));
    e.reject = lowered(string_list(j, "reject", where));
    e.add_manual = lowered(string_list(j, "add_manual", where));
    e.add_morphological = lowered(string_list(j, "add_morphological", where));
    out.push_back(std::move(e));
  }
  return out;
}

CurationFile load_curation(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("curation file not found: " + path.string());
  return parse_curation(detail::read_file(path));
}

std::string curation_to_json(const CurationFile& curation) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& e : curation)
    out.push_back({{"topic", e.topic},
                   {"canonical", e.canonical},
                   {"accept", e.accept},
                   {"reject", e.reject},
                   {"add_manual", e.add_manual},
                   {"add_morphological", e.add_morphological}});
  return out.dump(1) + "\n";
}

Lexicon apply_curation(const Lexicon& lexicon, const CurationFile& curation) {
  std::vector<Topic> topics = lexicon.topics();
  for (const auto& e : curation) {
    Topic* topic = nullptr;
    KeywordGroup& group = group_ref(topics, e, &topic);
    std::erase_if(group.variants, [&](const Variant& v) {
      return v.provenance == Provenance::Embedding && !contains(e.accept, v.text) && contains(e.reject, v.text);
    });
    for (const auto& s : e.accept) insert_variant(*topic, group, s, Provenance::Manual);
    for (const auto& s : e.add_manual) insert_variant(*topic, group, s, Provenance::Manual);
    for (const auto& s : e.add_morphological) insert_variant(*topic, group, s, Provenance::Morphological);
  }
  return Lexicon(std::move(topics));
}

Lexicon expand_lexicon(const Lexicon& base, const EmbeddingTable& table, const CurationFile& curation,
                       std::size_t candidate_k, double threshold, std::vector<ExpansionReport>* report) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  std::map<std::pair<std::string, std::string>, const CurationEntry*> entries;
  for (const auto& e : curation) {
    if (!base.find_group(e.topic, e.canonical))
      throw NotFoundError("curation references unknown keyword '" + e.canonical + "' in topic '" + e.topic + "'");
    entries[{e.topic, e.canonical}] = &e;
  }

  std::vector<Topic> topics = base.topics();
  for (auto& topic : topics) {
    for (auto& group : topic.groups) {
      auto it = entries.find({topic.name, group.canonical});
      const CurationEntry* entry = it == entries.end() ? nullptr : it->second;
      ExpansionReport rep{topic.name, group.canonical, candidates_for(table, group.canonical, candidate_k), {}};
      const bool pinned = entry && !entry->accept.empty();
      rep.expansion.accepted =
          accept_candidates(rep.expansion.candidates, group.canonical, [&](const Neighbor& n) {
            std::string text = n.word;
            std::replace(text.begin(), text.end(), '_', ' ');
            text = to_lower(text);
            if (entry && contains(entry->reject, text)) return false;
            return pinned ? contains(entry->accept, text) : n.score >= threshold;
          });
      for (const auto& v : rep.expansion.accepted) {
        if (group.find(v.text)) continue;
        if (sibling_holding(topic, group, v.text)) {
          rep.skipped_duplicates.push_back(v.text);
          continue;
        }
        Variant copy = v;
        copy.tokens = tokenize(copy.text);
        group.variants.push_back(std::move(copy));
      }
      if (report) report->push_back(std::move(rep));
    }
  }
  // Curation may add a word that the embedding pass already placed in a
  // sibling group; the curator's placement wins.
  for (const auto& e : curation) {
    Topic* topic = nullptr;
    KeywordGroup& group = group_ref(topics, e, &topic);
    for (const auto* list : {&e.accept, &e.add_manual, &e.add_morphological})
      for (const auto& s : *list)
        for (auto& g : topic->groups)
          if (&g != &group)
            std::erase_if(g.variants, [&](const Variant& v) {
              return v.provenance == Provenance::Embedding && token_form(v.text) == token_form(s);
            });
  }
  return apply_curation(Lexicon(std::move(topics)), curation);
}

}  // namespace laip
