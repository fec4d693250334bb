#include "klustree/service.hpp"

#include <httplib.h>

#include <mutex>

#include "klustree/errors.hpp"

namespace klustree {

namespace {

QueryService::Response error(int status, const std::string& message, const std::string& keyword = {}) {
  nlohmann::json body{{"error", message}};
  if (!keyword.empty()) body["keyword"] = keyword;
  return {status, std::move(body)};
}

PipelineConfig config_from_request(const nlohmann::json& j, PipelineConfig cfg) {
  if (j.contains("method")) cfg.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("heuristic")) cfg.heuristic = parse_heuristic(j.at("heuristic").get<std::string>());
  if (j.contains("limit")) cfg.top_n = j.at("limit").get<std::size_t>();
  if (j.contains("max_edges")) cfg.max_edges = j.at("max_edges").get<std::size_t>();
  if (j.contains("k_min")) cfg.k_min = j.at("k_min").get<std::size_t>();
  if (j.contains("k_max")) cfg.k_max = j.at("k_max").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("lambda")) cfg.lm.lambda = j.at("lambda").get<double>();
  if (j.contains("mu")) cfg.lm.mu = j.at("mu").get<double>();
  if (j.contains("mu_s")) cfg.lm.mu_s = j.at("mu_s").get<double>();
  if (j.contains("mu_o")) cfg.lm.mu_o = j.at("mu_o").get<double>();
  if (j.contains("gamma")) cfg.lm.gamma = j.at("gamma").get<double>();
  cfg.validate();
  return cfg;
}

}  // namespace

QueryService::QueryService(Graph graph, PipelineConfig defaults)
    : graph_(std::move(graph)), defaults_(std::move(defaults)) {
  defaults_.validate();
}

QueryService::Response QueryService::post_query(std::string_view body) {
  try {
    const auto j = nlohmann::json::parse(body);
    if (!j.is_object()) return error(400, "request body must be a JSON object");
    const auto cfg = config_from_request(j, defaults_);
    const KeywordQuery query(j.at("keywords").get<std::vector<std::string>>());

    auto stored = std::make_shared<StoredQuery>(StoredQuery{cfg, PipelineResult{query}, {}, {}});
    if (j.contains("trees")) {
      std::vector<AnswerTree> trees;
      for (const auto& t : j.at("trees")) trees.push_back(answer_tree_from_json(t));
      stored->result = run_pipeline(graph_, cfg, query, std::move(trees));
    } else {
      stored->result = run_pipeline(graph_, cfg, query);
    }

    std::string id;
    {
      std::unique_lock lock(mutex_);
      id = "q" + std::to_string(next_id_++);
      queries_.emplace(id, stored);
    }
    return {200, {{"query_id", id}, {"result", to_json(stored->result, cfg, cfg.heuristic)}}};
  } catch (const StageError& e) {
    return error(400, e.what(), e.keyword());
  } catch (const UnmatchedKeywordError& e) {
    return error(400, e.what(), e.keyword());
  } catch (const Error& e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  }
}

std::shared_ptr<QueryService::StoredQuery> QueryService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = queries_.find(id);
  return it == queries_.end() ? nullptr : it->second;
}

QueryService::Response QueryService::get_query(const std::string& id) const {
  const auto q = find(id);
  if (!q) return error(404, "unknown query id \"" + id + "\"");
  return {200, {{"query_id", id}, {"result", to_json(q->result, q->config, q->config.heuristic)}}};
}

QueryService::Response QueryService::get_clusters(const std::string& id, std::string_view heuristic) const {
  const auto q = find(id);
  if (!q) return error(404, "unknown query id \"" + id + "\"");
  try {
    const auto h = heuristic.empty() ? q->config.heuristic : parse_heuristic(heuristic);
    return {200, {{"query_id", id}, {"result", to_json(q->result, q->config, h)}}};
  } catch (const Error& e) {
    return error(400, e.what());
  }
}

QueryService::Response QueryService::get_pairs(const std::string& id) const {
  const auto q = find(id);
  if (!q) return error(404, "unknown query id \"" + id + "\"");
  return {200, {{"query_id", id}, {"pairs", judgment_pairs_to_json(q->result)}}};
}

QueryService::Response QueryService::post_judgments(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  }
  if (!j.is_object() || !j.contains("query_id") || !j.at("query_id").is_string()) {
    return error(400, "judgments need a string \"query_id\"");
  }
  const auto id = j.at("query_id").get<std::string>();
  const auto q = find(id);
  if (!q) return error(404, "unknown query id \"" + id + "\"");

  try {
    const std::size_t n = q->result.trees.size();
    std::vector<PairGrade> pairs;
    for (const auto& p : j.value("pairs", nlohmann::json::array())) {
      PairGrade g{p.at("a").get<std::size_t>(), p.at("b").get<std::size_t>(), p.at("grade").get<int>()};
      if (g.a >= n || g.b >= n) return error(400, "pair refers to an unknown tree id");
      if (g.grade < kMinGrade || g.grade > kMaxGrade) return error(400, "pair grade must lie in [1, 5]");
      pairs.push_back(g);
    }
    RelevanceGrades relevance;
    if (j.contains("grades")) {
      relevance = grades_from_json(j).grades;
      for (const auto& [cluster, grade] : relevance) {
        if (cluster >= q->result.clustering.k) return error(400, "grade for unknown cluster " + std::to_string(cluster));
      }
    }

    nlohmann::json response{{"query_id", id}};
    {
      std::unique_lock lock(mutex_);
      q->pair_grades.insert(q->pair_grades.end(), pairs.begin(), pairs.end());
      for (const auto& [cluster, grade] : relevance) q->relevance[cluster] = grade;
      response["stored_pairs"] = q->pair_grades.size();
      response["stored_grades"] = q->relevance.size();
      if (q->result.clustering.k > 0 && q->relevance.size() == q->result.clustering.k) {
        nlohmann::json scores = nlohmann::json::object();
        for (const auto h : kAllHeuristics) {
          scores[std::string(to_string(h))] = ndcg(q->result.ranking(h).order, q->relevance);
        }
        response["ndcg"] = std::move(scores);
      }
    }
    return {200, std::move(response)};
  } catch (const Error& e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, std::string("malformed judgments: ") + e.what());
  }
}

QueryService::Response QueryService::health() const {
  return {200,
          {{"status", "ok"},
           {"triples", graph_.triple_count()},
           {"nodes", graph_.node_count()},
           {"predicates", graph_.predicate_count()}}};
}

void mount(httplib::Server& server, QueryService& service) {
  auto reply = [](httplib::Response& res, const QueryService::Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/api/query", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_query(req.body));
  });
  server.Get(R"(/api/query/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_query(req.matches[1]));
  });
  server.Get(R"(/api/query/([^/]+)/clusters)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_clusters(req.matches[1], req.get_param_value("heuristic")));
  });
  server.Get(R"(/api/query/([^/]+)/pairs)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get_pairs(req.matches[1]));
  });
  server.Post("/api/judgments", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_judgments(req.body));
  });
  server.Get("/api/health", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.health());
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
  });
}

int serve(const PipelineConfig& cfg, const std::string& host, int port) {
  QueryService service(load_graph_file(cfg.graph_path), cfg);
  httplib::Server server;
  mount(server, service);
  if (!server.listen(host, port)) return 1;
  return 0;
}

}  // namespace klustree
