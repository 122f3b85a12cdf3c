#include "laip/service.hpp"

#include <cstdlib>
#include <sstream>

#include "httplib.h"
#include "json_util.hpp"
#include "laip/error.hpp"
#include "laip/text.hpp"

namespace laip {

using ojson = nlohmann::ordered_json;

namespace {

std::string table_fingerprint(const EmbeddingTable& table) {
  std::string bytes = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  for (std::size_t r = 0; r < table.size(); ++r) {
    bytes += table.word(r);
    const auto v = table.vector(r);
    bytes.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float));
  }
  return content_hash(bytes);
}

}  // namespace

std::string snapshot_id_for(const Corpus& corpus, const Lexicon& lexicon, const EmbeddingTable* table,
                            const rdf::Vocabulary& vocabulary) {
  std::string identity = corpus_to_json(corpus) + lexicon_to_json(lexicon) + vocabulary.base();
  if (table) identity += table_fingerprint(*table);
  return content_hash(identity);
}

AnalysisSnapshot build_snapshot(Corpus corpus, Lexicon lexicon, std::shared_ptr<const EmbeddingTable> table,
                                rdf::Vocabulary vocabulary, std::optional<ItemEmbeddingIndex> cached_index) {
  AnalysisSnapshot s{std::move(corpus), std::move(lexicon), {}, {}, {}, {}, {}, std::move(vocabulary), {}, std::move(table), {}, {}};
  s.keyword_matrix = compute_coverage(s.corpus, s.lexicon, Granularity::Keyword);
  s.topic_matrix = aggregate_by_topic(s.keyword_matrix, s.lexicon);
  s.topic_ranking = rank_proposals(s.topic_matrix);
  s.keyword_ranking = rank_proposals(s.keyword_matrix);
  s.groups = compare_groups(s.topic_matrix, s.corpus);
  s.graph = rdf::build_graph(s.corpus, s.lexicon, s.topic_matrix, s.keyword_matrix, s.vocabulary);
  if (s.table)
    s.index = cached_index && cached_index->dim() == s.table->dim() ? std::move(*cached_index)
                                                                      : build_index(s.corpus, *s.table);
  s.snapshot_id = snapshot_id_for(s.corpus, s.lexicon, s.table.get(), s.vocabulary);
  return s;
}

namespace service {

Config config_from_env(Config base) {
  if (const char* b = std::getenv("LAIP_BIND"); b && *b) base.bind = b;
  if (const char* p = std::getenv("LAIP_PORT"); p && *p) {
    try {
      base.port = std::stoi(p);
    } catch (const std::exception&) {
      throw ValidationError(std::string("LAIP_PORT is not a number: ") + p);
    }
  }
  if (const char* o = std::getenv("LAIP_CORS_ORIGINS"); o && *o) {
    std::stringstream ss(o);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) base.cors_origins.push_back(item);
  }
  return base;
}

namespace {

Response json_response(const AnalysisSnapshot& s, int status, ojson payload) {
  ojson body{{"snapshot_id", s.snapshot_id}};
  for (auto& [k, v] : payload.items()) body[k] = std::move(v);
  return {status, "application/json", body.dump(), {}};
}

Response error_response(const AnalysisSnapshot& s, int status, std::string message) {
  return json_response(s, status, ojson{{"error", {{"status", status}, {"message", std::move(message)}}}});
}

ojson proposal_summary(const AnalysisSnapshot& s, const Proposal& p) {
  const auto row = *s.topic_matrix.row_index(p.id);
  return ojson{{"id", p.id},
               {"title", p.title},
               {"publisher", p.publisher},
               {"publisher_type", to_string(p.publisher_type)},
               {"year", p.year},
               {"source_url", p.source_url},
               {"item_count", p.items.size()},
               {"topics_covered", s.topic_matrix.covered(row)},
               {"keywords_covered", s.keyword_matrix.covered(row)}};
}

ojson hits_json(const std::vector<SearchHit>& hits) {
  ojson out = ojson::array();
  for (const auto& h : hits)
    out.push_back({{"proposal_id", h.proposal_id}, {"item_id", h.item_id}, {"score", h.score}, {"snippet", h.snippet}});
  return out;
}

ojson matrix_json(const CoverageMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ojson cells = ojson::array();
    for (std::size_t c = 0; c < m.columns(); ++c) cells.push_back(m.at(r, c));
    rows.push_back({{"proposal_id", m.row_ids()[r]}, {"cells", std::move(cells)}});
  }
  return ojson{{"granularity", to_string(m.granularity())}, {"columns", m.column_ids()}, {"rows", std::move(rows)}};
}

std::optional<Granularity> requested_granularity(const Request& req, bool& bad) {
  bad = false;
  auto it = req.query.find("granularity");
  if (it == req.query.end()) return Granularity::Topic;
  auto g = parse_granularity(it->second);
  bad = !g;
  return g;
}

Response route(const AnalysisSnapshot& s, const Request& req) {
  const std::string& path = req.path;
  const bool get = req.method == "GET" || req.method == "HEAD";

  if (path == "/api/search/paragraph") {
    if (req.method != "POST") return error_response(s, 405, "use POST");
    if (!s.table) return error_response(s, 503, "paragraph search needs an embedding table");
    ojson body;
    try {
      body = ojson::parse(req.body);
    } catch (const ojson::parse_error&) {
      return error_response(s, 400, "request body is not valid JSON");
    }
    if (!body.is_object() || !body.contains("text") || !body["text"].is_string())
      return error_response(s, 400, "body must be an object with a string 'text'");
    std::size_t k = 10;
    if (body.contains("k")) {
      if (!body["k"].is_number_integer() || body["k"].get<long long>() < 1)
        return error_response(s, 400, "'k' must be a positive integer");
      k = body["k"].get<std::size_t>();
    }
    const std::string text = body["text"].get<std::string>();
    try {
      return json_response(s, 200, ojson{{"text", text}, {"k", k},
                                         {"hits", hits_json(paragraph_search(text, s.index, *s.table, s.corpus, k))}});
    } catch (const ValidationError& e) {
      return error_response(s, 422, e.what());
    }
  }

  if (!get) return error_response(s, 405, "read-only API: only GET is supported here");

  if (path == "/api/proposals") {
    ojson list = ojson::array();
    for (const auto& p : s.corpus.proposals()) list.push_back(proposal_summary(s, p));
    return json_response(s, 200, ojson{{"proposals", std::move(list)}});
  }
  if (path.rfind("/api/proposals/", 0) == 0) {
    const std::string id = path.substr(std::string("/api/proposals/").size());
    const Proposal* p = s.corpus.find(id);
    if (!p) return error_response(s, 404, "unknown proposal '" + id + "'");
    ojson detail = proposal_summary(s, *p);
    ojson items = ojson::array();
    for (const auto& i : p->items)
      items.push_back({{"item_id", i.item_id}, {"title_text", i.title_text}, {"explanatory_text", i.explanatory_text}});
    detail["items"] = std::move(items);
    const auto row = *s.topic_matrix.row_index(p->id);
    ojson topics = ojson::object();
    for (std::size_t c = 0; c < s.topic_matrix.columns(); ++c) topics[s.topic_matrix.column_ids()[c]] = s.topic_matrix.at(row, c);
    ojson keywords = ojson::object();
    for (std::size_t c = 0; c < s.keyword_matrix.columns(); ++c)
      if (auto v = s.keyword_matrix.at(row, c)) keywords[s.keyword_matrix.column_ids()[c]] = v;
    detail["topic_counts"] = std::move(topics);
    detail["keyword_counts"] = std::move(keywords);
    return json_response(s, 200, ojson{{"proposal", std::move(detail)}});
  }
  if (path == "/api/topics") {
    ojson list = ojson::array();
    for (const auto& t : s.lexicon.topics()) {
      ojson kws = ojson::array();
      for (const auto& g : t.groups) kws.push_back(g.canonical);
      list.push_back({{"name", t.name}, {"keywords", std::move(kws)}});
    }
    return json_response(s, 200, ojson{{"topics", std::move(list)}});
  }
  if (path == "/api/lexicon") return json_response(s, 200, ojson{{"lexicon", ojson::parse(lexicon_to_json(s.lexicon))}});
  if (path == "/api/coverage" || path == "/api/rankings") {
    bool bad = false;
    const auto g = requested_granularity(req, bad);
    if (bad) return error_response(s, 400, "granularity must be 'topic' or 'keyword'");
    const CoverageMatrix& m = *g == Granularity::Topic ? s.topic_matrix : s.keyword_matrix;
    if (path == "/api/coverage") return json_response(s, 200, matrix_json(m));
    ojson list = ojson::array();
    for (const auto& e : *g == Granularity::Topic ? s.topic_ranking : s.keyword_ranking)
      list.push_back({{"rank", e.rank}, {"proposal_id", e.proposal_id}, {"score", e.score}});
    return json_response(s, 200, ojson{{"granularity", to_string(*g)}, {"rankings", std::move(list)}});
  }
  if (path == "/api/groups") return json_response(s, 200, ojson{{"groups", ojson::parse(groups_to_json(s.groups))}});
  if (path == "/api/graph.nt" || path == "/api/graph.ttl") {
    Response r;
    if (path == "/api/graph.nt") {
      r.content_type = "text/plain; charset=utf-8";
      r.body = rdf::serialize_ntriples(s.graph);
    } else {
      r.content_type = "text/turtle; charset=utf-8";
      r.body = rdf::serialize_turtle(s.graph, s.vocabulary);
    }
    return r;
  }
  if (path == "/api/search") {
    auto it = req.query.find("q");
    if (it == req.query.end()) return error_response(s, 400, "missing query parameter 'q'");
    const auto result = keyword_search(it->second, s.corpus, s.lexicon, s.keyword_matrix);
    ojson resolved = ojson::array();
    for (const auto& r : result.resolved) resolved.push_back({{"topic", r.topic}, {"canonical", r.canonical}});
    return json_response(s, 200, ojson{{"query", it->second},
                                       {"mode", result.literal ? "literal" : "lexicon"},
                                       {"resolved", std::move(resolved)},
                                       {"hits", hits_json(result.hits)}});
  }
  return error_response(s, 404, "no such endpoint: " + path);
}

}  // namespace

Response handle(const AnalysisSnapshot& snapshot, const Config& config, const Request& request) {
  Response r;
  if (request.method == "OPTIONS") {
    r.status = 204;
    r.content_type.clear();
    r.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
    r.headers["Access-Control-Allow-Headers"] = "Content-Type";
  } else {
    try {
      r = route(snapshot, request);
    } catch (const std::exception& e) {
      r = error_response(snapshot, 500, e.what());
    }
  }
  r.headers["X-Snapshot-Id"] = snapshot.snapshot_id;
  if (!request.origin.empty()) {
    for (const auto& o : config.cors_origins)
      if (o == "*" || o == request.origin) {
        r.headers["Access-Control-Allow-Origin"] = request.origin;
        r.headers["Vary"] = "Origin";
        break;
      }
  }
  return r;
}

Server::Server(const AnalysisSnapshot& snapshot, Config config)
    : snapshot_(snapshot), config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
  auto dispatch = [this](const httplib::Request& hreq, httplib::Response& hres) {
    Request req{hreq.method, hreq.path, {}, hreq.body, hreq.get_header_value("Origin")};
    for (const auto& [k, v] : hreq.params) req.query.emplace(k, v);
    const Response r = handle(snapshot_, config_, req);
    hres.status = r.status;
    for (const auto& [k, v] : r.headers) hres.set_header(k, v);
    if (!r.content_type.empty()) hres.set_content(r.body, r.content_type);
  };
  const std::string any = R"(/.*)";
  http_->Get(any, dispatch);
  http_->Post(any, dispatch);
  http_->Options(any, dispatch);
  http_->Put(any, dispatch);
  http_->Delete(any, dispatch);
  http_->Patch(any, dispatch);
}

Server::~Server() { stop(); }

int Server::bind() {
  if (config_.port == 0)
    port_ = http_->bind_to_any_port(config_.bind);
  else
    port_ = http_->bind_to_port(config_.bind, config_.port) ? config_.port : -1;
  if (port_ < 0) throw IoError("cannot bind " + config_.bind + ":" + std::to_string(config_.port));
  return port_;
}

void Server::listen() {
  if (port_ < 0) throw IoError("listen() before bind()");
  http_->listen_after_bind();
}

void Server::stop() {
  if (http_) http_->stop();
}

}  // namespace service
}  // namespace laip
