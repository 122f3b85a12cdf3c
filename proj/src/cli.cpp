#include "laip/cli.hpp"

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "json_util.hpp"
#include "laip/analysis.hpp"
#include "laip/corpus.hpp"
#include "laip/embeddings.hpp"
#include "laip/error.hpp"
#include "laip/lexicon.hpp"
#include "laip/linking.hpp"
#include "laip/search.hpp"
#include "laip/service.hpp"

namespace laip::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string corpus = std::string(LAIP_DATA_DIR) + "/corpus.json";
  std::string lexicon = std::string(LAIP_DATA_DIR) + "/lexicon_expanded.json";
  std::string curation;
  std::string embeddings;
  std::string format = "auto";
  std::size_t limit = kDefaultVocabularyLimit;
  double threshold = kDefaultThreshold;
  std::size_t candidate_k = kDefaultCandidateK;
  std::string output = ".";
  std::string base_iri = std::string(rdf::kDefaultBaseIri);
};

EmbeddingFormat resolve_format(const RunConfig& cfg) {
  if (cfg.format == "auto") return fs::path(cfg.embeddings).extension() == ".bin" ? EmbeddingFormat::Binary : EmbeddingFormat::Text;
  return *parse_embedding_format(cfg.format);
}

std::shared_ptr<const EmbeddingTable> load_table(const RunConfig& cfg, std::ostream& err) {
  auto table = std::make_shared<EmbeddingTable>(load_embeddings(cfg.embeddings, resolve_format(cfg), cfg.limit));
  const auto& st = table->stats();
  err << "loaded " << table->size() << " vectors (dim " << table->dim() << ") from " << cfg.embeddings;
  if (st.duplicates_skipped || st.zero_norm_skipped)
    err << "; skipped " << st.duplicates_skipped << " duplicates, " << st.zero_norm_skipped << " zero-norm";
  err << "\n";
  return table;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, std::string_view bytes, std::ostream& err) {
  detail::write_file(path, bytes);
  err << "wrote " << path.string() << "\n";
}

void add_data_options(CLI::App* cmd, RunConfig& cfg, bool with_lexicon = true) {
  cmd->add_option("--corpus", cfg.corpus, "Corpus JSON file")->check(CLI::ExistingFile)->capture_default_str();
  if (with_lexicon)
    cmd->add_option("--lexicon", cfg.lexicon, "Lexicon JSON file")->check(CLI::ExistingFile)->capture_default_str();
}

void add_embedding_options(CLI::App* cmd, RunConfig& cfg, bool required) {
  auto* opt = cmd->add_option("--embeddings", cfg.embeddings, "Word-vector interchange file")->check(CLI::ExistingFile);
  if (required) opt->required();
  cmd->add_option("--format", cfg.format, "Embedding file format")
      ->check(CLI::IsMember({"auto", "text", "binary"}))
      ->capture_default_str();
  cmd->add_option("--limit", cfg.limit, "Vocabulary cap (first N entries)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Corpus corpus = load_corpus(cfg.corpus);
  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const auto groups = group_by_publisher(corpus);
  out << "corpus: " << corpus.size() << " proposals";
  for (auto t : kPublisherTypes) out << ", " << to_string(t) << "=" << groups[t].size();
  out << "\nlexicon: " << lexicon.topics().size() << " topics, " << lexicon.canonical_count() << " keywords, "
      << lexicon.variant_count() << " variants\n";
  for (const auto& d : lexicon.cross_topic_duplicates())
    out << "note: '" << d.text << "' appears in topics " << d.first_topic << " and " << d.second_topic << "\n";
  if (!cfg.curation.empty()) {
    const auto curation = load_curation(cfg.curation);
    apply_curation(lexicon, curation);
    out << "curation: " << curation.size() << " entries\n";
  }
  out << "ok\n";
  return kExitOk;
}

std::string candidate_text(const Neighbor& n) {
  std::string text = n.word;
  std::replace(text.begin(), text.end(), '_', ' ');
  return to_lower(text);
}

int cmd_expand(const RunConfig& cfg, bool review, const std::string& curation_out, std::istream& in, std::ostream& out,
               std::ostream& err) {
  const Lexicon base = load_lexicon(cfg.lexicon);
  CurationFile curation = cfg.curation.empty() ? CurationFile{} : load_curation(cfg.curation);
  const auto table = load_table(cfg, err);

  if (review) {
    for (const auto& topic : base.topics())
      for (const auto& group : topic.groups) {
        const Expansion e = expand_keyword(*table, group.canonical, cfg.candidate_k, cfg.threshold);
        if (e.candidates.empty()) continue;
        out << topic.name << " / " << group.canonical << "\n";
        for (std::size_t i = 0; i < e.candidates.size(); ++i)
          out << "  " << i + 1 << ". " << e.candidates[i].word << " " << format_real(e.candidates[i].score) << "\n";
        out << "first deviating rank (Enter keeps threshold " << format_real(cfg.threshold) << "): " << std::flush;
        std::string line;
        if (!std::getline(in, line) || line.empty()) continue;
        std::size_t cut = 0;
        try {
          cut = std::stoul(line);
        } catch (const std::exception&) {
          throw ValidationError("expected a rank number, got '" + line + "'");
        }
        auto it = std::find_if(curation.begin(), curation.end(), [&](const CurationEntry& c) {
          return c.topic == topic.name && c.canonical == group.canonical;
        });
        if (it == curation.end()) it = curation.insert(curation.end(), CurationEntry{topic.name, group.canonical, {}, {}, {}, {}});
        it->accept.clear();
        it->reject.clear();
        for (std::size_t i = 0; i < e.candidates.size(); ++i)
          (i + 1 < cut ? it->accept : it->reject).push_back(candidate_text(e.candidates[i]));
      }
    if (!curation_out.empty()) write(curation_out, curation_to_json(curation), err);
  }

  std::vector<ExpansionReport> report;
  const Lexicon expanded = expand_lexicon(base, *table, curation, cfg.candidate_k, cfg.threshold, &report);
  if (!review) {
    for (const auto& r : report) {
      if (r.expansion.out_of_vocabulary) {
        err << "warning: '" << r.canonical << "' is not in the embedding vocabulary\n";
        continue;
      }
      if (r.expansion.candidates.empty()) continue;
      out << r.topic << " / " << r.canonical << "\n";
      for (std::size_t i = 0; i < r.expansion.candidates.size(); ++i) {
        const auto& n = r.expansion.candidates[i];
        const bool kept = std::any_of(r.expansion.accepted.begin(), r.expansion.accepted.end(),
                                      [&](const Variant& v) { return v.text == candidate_text(n); });
        out << "  " << i + 1 << ". " << n.word << " " << format_real(n.score) << (kept ? " +" : "") << "\n";
      }
      for (const auto& s : r.skipped_duplicates) err << "note: '" << s << "' already belongs to a sibling of '" << r.canonical << "'\n";
    }
  }
  for (const auto& d : expanded.cross_topic_duplicates())
    err << "note: '" << d.text << "' appears in topics " << d.first_topic << " and " << d.second_topic << "\n";
  fs::path target(cfg.output);
  if (fs::is_directory(target)) target /= "lexicon_expanded.json";
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write(target, lexicon_to_json(expanded), err);
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& err) {
  const Corpus corpus = load_corpus(cfg.corpus);
  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const auto kw = compute_coverage(corpus, lexicon, Granularity::Keyword);
  const auto topic = aggregate_by_topic(kw, lexicon);
  const fs::path dir = output_dir(cfg);
  write(dir / "coverage_topic.csv", matrix_to_csv(topic), err);
  write(dir / "coverage_keyword.csv", matrix_to_csv(kw), err);
  std::string pct = "proposal_id,topics_covered,topic_coverage_percent\n";
  for (const auto& id : topic.row_ids())
    pct += id + "," + std::to_string(topic.covered(*topic.row_index(id))) + "," +
           format_real(topic_coverage_percent(topic, id)) + "\n";
  write(dir / "coverage_percent.csv", pct, err);
  std::string matches = "proposal_id,item_id,topic_name,canonical,variant,count\n";
  for (const auto& m : match_corpus(corpus, lexicon))
    matches += m.proposal_id + "," + m.item_id + ",\"" + m.topic_name + "\",\"" + m.canonical + "\",\"" + m.variant +
               "\"," + std::to_string(m.count) + "\n";
  write(dir / "matches.csv", matches, err);
  return kExitOk;
}

int cmd_rank(const RunConfig& cfg, const std::string& from, std::ostream& err) {
  CoverageMatrix topic, kw;
  if (!from.empty()) {
    topic = matrix_from_csv(detail::read_file(fs::path(from) / "coverage_topic.csv"), Granularity::Topic);
    kw = matrix_from_csv(detail::read_file(fs::path(from) / "coverage_keyword.csv"), Granularity::Keyword);
  } else {
    const Corpus corpus = load_corpus(cfg.corpus);
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    kw = compute_coverage(corpus, lexicon, Granularity::Keyword);
    topic = aggregate_by_topic(kw, lexicon);
  }
  const fs::path dir = output_dir(cfg);
  write(dir / "ranking_topic.csv", ranking_to_csv(rank_proposals(topic)), err);
  write(dir / "ranking_keyword.csv", ranking_to_csv(rank_proposals(kw)), err);
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& err) {
  const Corpus corpus = load_corpus(cfg.corpus);
  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const auto groups = compare_groups(compute_coverage(corpus, lexicon, Granularity::Topic), corpus);
  const fs::path dir = output_dir(cfg);
  write(dir / "groups.json", groups_to_json(groups), err);
  write(dir / "groups.csv", groups_to_csv(groups), err);
  write(dir / "group_tests.csv", group_tests_to_csv(groups), err);
  return kExitOk;
}

int cmd_export(const RunConfig& cfg, std::ostream& err) {
  const Corpus corpus = load_corpus(cfg.corpus);
  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const auto kw = compute_coverage(corpus, lexicon, Granularity::Keyword);
  const auto topic = aggregate_by_topic(kw, lexicon);
  const rdf::Vocabulary vocab(cfg.base_iri);
  const auto graph = rdf::build_graph(corpus, lexicon, topic, kw, vocab);
  const fs::path dir = output_dir(cfg);
  write(dir / "graph.nt", rdf::serialize_ntriples(graph), err);
  write(dir / "graph.ttl", rdf::serialize_turtle(graph, vocab), err);
  return kExitOk;
}

void print_hits(const std::vector<SearchHit>& hits, std::ostream& out) {
  for (const auto& h : hits)
    out << h.proposal_id << "\t" << h.item_id << "\t" << format_real(h.score) << "\t" << h.snippet << "\n";
}

int cmd_search(const RunConfig& cfg, const std::string& query, bool paragraph, std::size_t k, std::ostream& out,
               std::ostream& err) {
  const Corpus corpus = load_corpus(cfg.corpus);
  if (paragraph) {
    if (cfg.embeddings.empty()) throw ValidationError("--paragraph needs --embeddings");
    const auto table = load_table(cfg, err);
    print_hits(paragraph_search(query, build_index(corpus, *table), *table, corpus, k), out);
    return kExitOk;
  }
  const Lexicon lexicon = load_lexicon(cfg.lexicon);
  const auto kw = compute_coverage(corpus, lexicon, Granularity::Keyword);
  const auto result = keyword_search(query, corpus, lexicon, kw);
  if (result.literal) {
    err << "no lexicon group matched; literal search\n";
  } else {
    for (const auto& r : result.resolved) err << "resolved: " << r.topic << " / " << r.canonical << "\n";
  }
  print_hits(result.hits, out);
  return kExitOk;
}

int cmd_serve(const RunConfig& cfg, service::Config scfg, const std::string& index_cache, std::ostream& err) {
  Corpus corpus = load_corpus(cfg.corpus);
  Lexicon lexicon = load_lexicon(cfg.lexicon);
  std::shared_ptr<const EmbeddingTable> table;
  std::optional<ItemEmbeddingIndex> cached;
  const rdf::Vocabulary vocab(cfg.base_iri);
  // The sidecar records which snapshot the cache was built for.
  const fs::path cache_id = index_cache + ".id";
  std::string expected_id;
  if (!cfg.embeddings.empty()) {
    table = load_table(cfg, err);
    expected_id = snapshot_id_for(corpus, lexicon, table.get(), vocab);
    if (!index_cache.empty() && fs::exists(index_cache) && fs::exists(cache_id) &&
        detail::read_file(cache_id) == expected_id) {
      cached = load_index(index_cache);
      err << "loaded item index cache " << index_cache << "\n";
    }
  }
  const bool rebuilt = table && !cached;
  const AnalysisSnapshot snapshot =
      build_snapshot(std::move(corpus), std::move(lexicon), table, vocab, std::move(cached));
  if (rebuilt && !index_cache.empty()) {
    save_index(snapshot.index, index_cache);
    detail::write_file(cache_id, snapshot.snapshot_id);
    err << "wrote item index cache " << index_cache << "\n";
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Server server(snapshot, scfg);
  const int port = server.bind();
  err << "serving snapshot " << snapshot.snapshot_id << " on http://" << scfg.bind << ":" << port << "\n";
  std::thread worker([&] { server.listen(); });
  int sig = 0;
  sigwait(&signals, &sig);
  err << "shutting down\n";
  server.stop();
  worker.join();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Link and analyze AI principle proposals through a topic lexicon"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate = app.add_subcommand("validate", "Check the corpus, lexicon and optional curation file");
  add_data_options(validate, cfg);
  validate->add_option("--curation", cfg.curation, "Curation JSON file")->check(CLI::ExistingFile);

  bool review = false;
  std::string curation_out;
  auto* expand = app.add_subcommand("expand-lexicon", "Expand the base lexicon with embedding neighbours and curation");
  expand->add_option("--lexicon", cfg.lexicon, "Base lexicon JSON file")->check(CLI::ExistingFile);
  expand->add_option("--curation", cfg.curation, "Curation JSON file")->check(CLI::ExistingFile);
  add_embedding_options(expand, cfg, true);
  expand->add_option("--threshold", cfg.threshold, "Automatic similarity cutoff")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  expand->add_option("--candidate-k", cfg.candidate_k, "Candidates listed per keyword")->check(CLI::PositiveNumber)->capture_default_str();
  expand->add_option("-o,--output", cfg.output, "Output lexicon file (or directory)");
  expand->add_flag("--review", review, "Ask for the cutoff of every keyword on standard input");
  expand->add_option("--curation-out", curation_out, "Write the reviewed curation file here");

  auto* analyze = app.add_subcommand("analyze", "Write topic and keyword coverage matrices");
  add_data_options(analyze, cfg);
  analyze->add_option("-o,--output", cfg.output, "Output directory");

  std::string from;
  auto* rank = app.add_subcommand("rank", "Write topic and keyword coverage rankings");
  add_data_options(rank, cfg);
  rank->add_option("--from", from, "Read coverage_*.csv from this directory instead of recomputing")->check(CLI::ExistingDirectory);
  rank->add_option("-o,--output", cfg.output, "Output directory");

  auto* compare = app.add_subcommand("compare-groups", "Write per-topic publisher-group statistics");
  add_data_options(compare, cfg);
  compare->add_option("-o,--output", cfg.output, "Output directory");

  auto* export_rdf = app.add_subcommand("export-rdf", "Write the linkage graph as N-Triples and Turtle");
  add_data_options(export_rdf, cfg);
  export_rdf->add_option("--base-iri", cfg.base_iri, "Base IRI for minted resources")->capture_default_str();
  export_rdf->add_option("-o,--output", cfg.output, "Output directory");

  std::string query;
  bool paragraph = false;
  std::size_t k = 10;
  auto* search = app.add_subcommand("search", "Keyword or paragraph search over principle items");
  add_data_options(search, cfg);
  search->add_option("text", query, "Query text")->required();
  search->add_flag("--paragraph", paragraph, "Rank items by embedding similarity to the text");
  search->add_option("-k", k, "Number of paragraph hits")->check(CLI::PositiveNumber)->capture_default_str();
  add_embedding_options(search, cfg, false);

  service::Config scfg;
  std::string cors;
  std::string index_cache;
  auto* serve = app.add_subcommand("serve", "Serve the read-only JSON API");
  add_data_options(serve, cfg);
  add_embedding_options(serve, cfg, false);
  serve->add_option("--base-iri", cfg.base_iri, "Base IRI for minted resources");
  serve->add_option("--bind", scfg.bind, "Bind address (env LAIP_BIND)");
  serve->add_option("--port", scfg.port, "Port (env LAIP_PORT)")->check(CLI::Range(0, 65535));
  serve->add_option("--cors-origins", cors, "Comma-separated allowed origins (env LAIP_CORS_ORIGINS)");
  serve->add_option("--index-cache", index_cache, "Item index cache file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (expand->parsed()) {
      if (expand->count("--lexicon") == 0) cfg.lexicon = std::string(LAIP_DATA_DIR) + "/lexicon_base.json";
      return cmd_expand(cfg, review, curation_out, in, out, err);
    }
    if (analyze->parsed()) return cmd_analyze(cfg, err);
    if (rank->parsed()) return cmd_rank(cfg, from, err);
    if (compare->parsed()) return cmd_compare(cfg, err);
    if (export_rdf->parsed()) return cmd_export(cfg, err);
    if (search->parsed()) return cmd_search(cfg, query, paragraph, k, out, err);
    if (serve->parsed()) {
      // Command-line values override the environment.
      service::Config from_env = service::config_from_env();
      if (serve->count("--bind") == 0) scfg.bind = from_env.bind;
      if (serve->count("--port") == 0) scfg.port = from_env.port;
      if (cors.empty()) scfg.cors_origins = from_env.cors_origins;
      if (!cors.empty()) {
        std::stringstream ss(cors);
        std::string o;
        while (std::getline(ss, o, ','))
          if (!o.empty()) scfg.cors_origins.push_back(o);
      }
      return cmd_serve(cfg, scfg, index_cache, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace laip::cli
