// klustree: command-line front end for search, clustering, evaluation, and the HTTP service.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "klustree/errors.hpp"
#include "klustree/evaluation.hpp"
#include "klustree/graph_store.hpp"
#include "klustree/keyword_search.hpp"
#include "klustree/language_models.hpp"
#include "klustree/pipeline.hpp"
#include "klustree/service.hpp"

namespace {

using klustree::PipelineConfig;

std::vector<std::string> split_keywords(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw klustree::NotFoundError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw klustree::ContractError(path + ": " + e.what());
  }
}

void add_lm_options(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--lambda", cfg.lm.lambda, "Smoothing weight")->capture_default_str();
  cmd->add_option("--mu", cfg.lm.mu, "Entity unigram weight")->capture_default_str();
  cmd->add_option("--mu-s", cfg.lm.mu_s, "Relationship subject-unigram weight")->capture_default_str();
  cmd->add_option("--mu-o", cfg.lm.mu_o, "Relationship object-unigram weight")->capture_default_str();
  cmd->add_option("--gamma", cfg.lm.gamma, "Entity vs relationship weight in tree distance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyword search over triple graphs with clustered answer trees"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string graph_path;
  std::string keywords;
  std::string method = "lm";
  std::string heuristic = "best";
  std::string trees_path;
  std::string pairs_path;

  auto* index = app.add_subcommand("index", "Load a TSV graph and print its statistics");
  index->add_option("graph", graph_path, "Graph TSV file")->required();

  auto* search = app.add_subcommand("search", "Enumerate ranked minimal answer trees");
  search->add_option("graph", graph_path, "Graph TSV file")->required();
  search->add_option("--q", keywords, "Comma-separated keywords")->required();
  search->add_option("--limit", cfg.top_n, "Number of answer trees")->capture_default_str();
  search->add_option("--max-edges", cfg.max_edges, "Largest answer tree in edges")->capture_default_str();

  auto* cluster = app.add_subcommand("cluster", "Search, cluster, and rank answer trees");
  cluster->add_option("graph", graph_path, "Graph TSV file")->required();
  cluster->add_option("--q", keywords, "Comma-separated keywords")->required();
  cluster->add_option("--method", method, "lm | iso | ted")->capture_default_str();
  cluster->add_option("--heuristic", heuristic, "best | worst | avg | size")->capture_default_str();
  cluster->add_option("--limit", cfg.top_n, "Number of answer trees")->capture_default_str();
  cluster->add_option("--max-edges", cfg.max_edges, "Largest answer tree in edges")->capture_default_str();
  cluster->add_option("--k-min", cfg.k_min, "Smallest K considered")->capture_default_str();
  cluster->add_option("--k-max", cfg.k_max, "Largest K considered")->capture_default_str();
  cluster->add_option("--seed", cfg.seed, "Seed for judgment-pair order")->capture_default_str();
  cluster->add_option("--trees", trees_path, "Answer-tree JSON to cluster instead of searching");
  cluster->add_option("--pairs", pairs_path, "Also write judgment pairs to this file");
  add_lm_options(cluster, cfg);

  std::string entity;
  std::string relationship;
  auto* lm = app.add_subcommand("lm", "Dump an entity or relationship language model as JSON");
  lm->add_option("graph", graph_path, "Graph TSV file")->required();
  auto* entity_opt = lm->add_option("--entity", entity, "Entity label");
  lm->add_option("--relationship", relationship, "Predicate label")->excludes(entity_opt);
  add_lm_options(lm, cfg);

  std::string grades_path;
  std::string clusters_path;
  auto* eval = app.add_subcommand("eval", "Evaluate cluster rankings");
  eval->require_subcommand(1);
  auto* eval_ndcg = eval->add_subcommand("ndcg", "NDCG of a clustering document's order against relevance grades");
  eval_ndcg->add_option("--grades", grades_path, "Grades JSON")->required();
  eval_ndcg->add_option("--clusters", clusters_path, "Clustering document JSON")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API over one graph");
  serve->add_option("--graph", graph_path, "Graph TSV file")->required();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--limit", cfg.top_n, "Default number of answer trees")->capture_default_str();
  add_lm_options(serve, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.graph_path = graph_path;
    if (*index) {
      const auto g = klustree::load_graph_file(graph_path);
      std::cout << nlohmann::json{{"triples", g.triple_count()},
                                  {"nodes", g.node_count()},
                                  {"predicates", g.predicate_count()}}
                       .dump(2)
                << '\n';
    } else if (*search) {
      const auto g = klustree::load_graph_file(graph_path);
      const klustree::KeywordQuery q(split_keywords(keywords));
      const auto trees = klustree::enumerate_answer_trees(g, q, {cfg.top_n, cfg.max_edges});
      std::cout << klustree::answer_trees_to_json(q, trees).dump(2) << '\n';
    } else if (*cluster) {
      cfg.method = klustree::parse_method(method);
      cfg.heuristic = klustree::parse_heuristic(heuristic);
      const auto g = klustree::load_graph_file(graph_path);
      const klustree::KeywordQuery q(split_keywords(keywords));
      klustree::PipelineResult result =
          trees_path.empty()
              ? klustree::run_pipeline(g, cfg, q)
              : klustree::run_pipeline(g, cfg, q, klustree::answer_trees_from_json(read_json_file(trees_path)).trees);
      if (!pairs_path.empty()) {
        std::ofstream out(pairs_path);
        out << klustree::judgment_pairs_to_json(result).dump(2) << '\n';
      }
      std::cout << klustree::to_json(result, cfg, cfg.heuristic).dump(2) << '\n';
    } else if (*lm) {
      const auto g = klustree::load_graph_file(graph_path);
      if (entity.empty() == relationship.empty()) {
        std::cerr << "error: pass exactly one of --entity or --relationship\n";
        return 2;
      }
      const auto model = entity.empty() ? klustree::estimate_relationship_lm(g, relationship, cfg.lm)
                                        : klustree::estimate_entity_lm(g, entity, cfg.lm);
      std::cout << klustree::to_json(model).dump(2) << '\n';
    } else if (*eval_ndcg) {
      const auto grades = klustree::grades_from_json(read_json_file(grades_path));
      const auto doc = read_json_file(clusters_path);
      std::vector<std::size_t> order;
      for (const auto& c : doc.at("clusters")) order.push_back(c.at("id").get<std::size_t>());
      std::cout << nlohmann::json{{"heuristic", doc.value("heuristic", std::string{})},
                                  {"ndcg", klustree::ndcg(order, grades.grades)}}
                       .dump(2)
                << '\n';
    } else if (*serve) {
      std::cerr << "serving " << graph_path << " on http://" << host << ':' << port << '\n';
      return klustree::serve(cfg, host, port);
    }
  } catch (const klustree::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
