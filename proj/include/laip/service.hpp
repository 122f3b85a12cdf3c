#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laip/analysis.hpp"
#include "laip/corpus.hpp"
#include "laip/embeddings.hpp"
#include "laip/lexicon.hpp"
#include "laip/linking.hpp"
#include "laip/search.hpp"

namespace httplib {
class Server;
}

namespace laip {

/// Everything the API serves, computed once from one corpus + lexicon pair.
struct AnalysisSnapshot {
  Corpus corpus;
  Lexicon lexicon;
  CoverageMatrix topic_matrix;
  CoverageMatrix keyword_matrix;
  std::vector<RankingEntry> topic_ranking;
  std::vector<RankingEntry> keyword_ranking;
  std::vector<GroupComparison> groups;
  rdf::Vocabulary vocabulary;
  rdf::LinkGraph graph;
  std::shared_ptr<const EmbeddingTable> table;  // null: paragraph search disabled
  ItemEmbeddingIndex index;
  std::string snapshot_id;
};

/// Content hash over the inputs a snapshot is derived from.
std::string snapshot_id_for(const Corpus& corpus, const Lexicon& lexicon, const EmbeddingTable* table,
                            const rdf::Vocabulary& vocabulary);

/// `cached_index` is trusted as-is when its dimension matches the table.
AnalysisSnapshot build_snapshot(Corpus corpus, Lexicon lexicon, std::shared_ptr<const EmbeddingTable> table = nullptr,
                                rdf::Vocabulary vocabulary = rdf::Vocabulary(),
                                std::optional<ItemEmbeddingIndex> cached_index = std::nullopt);

namespace service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string origin;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct Config {
  std::string bind = "127.0.0.1";
  int port = 8080;
  /// Extra origins allowed by CORS; "*" allows any.
  std::vector<std::string> cors_origins;
};

/// Reads LAIP_BIND, LAIP_PORT and LAIP_CORS_ORIGINS (comma separated).
Config config_from_env(Config base = {});

/// Routes one request against the snapshot. Pure: no I/O, no state.
Response handle(const AnalysisSnapshot& snapshot, const Config& config, const Request& request);

/// HTTP front end over handle(). The snapshot must outlive the server.
class Server {
 public:
  Server(const AnalysisSnapshot& snapshot, Config config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; returns the bound port (useful with port 0).
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void listen();
  void stop();

 private:
  const AnalysisSnapshot& snapshot_;
  Config config_;
  std::unique_ptr<httplib::Server> http_;
  int port_ = -1;
};

}  // namespace service
}  // namespace laip
