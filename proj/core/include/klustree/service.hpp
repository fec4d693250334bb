#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "klustree/graph_store.hpp"
#include "klustree/pipeline.hpp"

namespace httplib {
class Server;
}

namespace klustree {

/// HTTP-independent request handling over one immutable graph. Every handler
/// is safe to call concurrently.
class QueryService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  QueryService(Graph graph, PipelineConfig defaults);

  /// POST /api/query
  Response post_query(std::string_view body);
  /// GET /api/query/{id}
  Response get_query(const std::string& id) const;
  /// GET /api/query/{id}/clusters?heuristic=...
  Response get_clusters(const std::string& id, std::string_view heuristic) const;
  /// GET /api/query/{id}/pairs
  Response get_pairs(const std::string& id) const;
  /// POST /api/judgments
  Response post_judgments(std::string_view body);
  /// GET /api/health
  Response health() const;

  const Graph& graph() const noexcept { return graph_; }

 private:
  struct PairGrade {
    std::size_t a;
    std::size_t b;
    int grade;
  };
  struct StoredQuery {
    PipelineConfig config;
    PipelineResult result;
    std::vector<PairGrade> pair_grades;
    RelevanceGrades relevance;
  };

  std::shared_ptr<StoredQuery> find(const std::string& id) const;

  Graph graph_;
  PipelineConfig defaults_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<StoredQuery>> queries_;
  std::uint64_t next_id_ = 1;
};

/// Routes the /api endpoints of `service` on `server`.
void mount(httplib::Server& server, QueryService& service);

/// Loads the graph and blocks serving on host:port. Returns non-zero on bind failure.
int serve(const PipelineConfig& cfg, const std::string& host, int port);

}  // namespace klustree
