#include "klustree/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <type_traits>

#include "klustree/baseline_clustering.hpp"
#include "klustree/errors.hpp"

namespace klustree {

namespace {

template <class F>
auto in_stage(const char* name, F&& f) {
  try {
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      f();
    } else {
      return f();
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::size_t heuristic_index(RankingHeuristic h) {
  return static_cast<std::size_t>(std::find(std::begin(kAllHeuristics), std::end(kAllHeuristics), h) -
                                  std::begin(kAllHeuristics));
}

nlohmann::json ch_to_json(double ch) {
  if (std::isnan(ch)) return nullptr;
  if (std::isinf(ch)) return "inf";
  return ch;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::LM: return "lm";
    case Method::ISO: return "iso";
    case Method::TED: return "ted";
  }
  return "lm";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "lm") return Method::LM;
  if (lower == "iso" || lower == "isomorphism") return Method::ISO;
  if (lower == "ted") return Method::TED;
  throw ContractError("unknown clustering method \"" + std::string(name) + "\"");
}

void PipelineConfig::validate() const {
  lm.validate();
  if (top_n == 0) throw ContractError("top_n must be positive");
  if (max_edges == 0) throw ContractError("max_edges must be positive");
  if (k_max < 2 || k_min > k_max) throw ContractError("K range must satisfy k_min <= k_max and k_max >= 2");
}

const ClusterRanking& PipelineResult::ranking(RankingHeuristic h) const {
  return rankings[heuristic_index(h)];
}

PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg, const KeywordQuery& q) {
  in_stage("config", [&] { cfg.validate(); });
  auto trees = in_stage("search", [&] {
    return enumerate_answer_trees(g, q, SearchOptions{cfg.top_n, cfg.max_edges});
  });
  return run_pipeline(g, cfg, q, std::move(trees));
}

PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg, const KeywordQuery& q,
                            std::vector<AnswerTree> trees) {
  in_stage("config", [&] { cfg.validate(); });
  in_stage("search", [&] {
    if (trees.size() > cfg.top_n) trees.resize(cfg.top_n);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (const auto why = validate_answer_tree(g, trees[i], q)) {
        throw ContractError("answer tree " + std::to_string(i) + ": " + *why);
      }
      if (trees[i].rank == 0) trees[i].rank = i + 1;
    }
  });

  PipelineResult r{q, cfg.method, std::move(trees), {}, {}, {}, {}};
  const std::size_t n = r.trees.size();
  if (n == 0) return r;

  r.distances = in_stage("distances", [&] {
    switch (cfg.method) {
      case Method::ISO:
        return isomorphism_distance_matrix(r.trees);
      case Method::TED:
        return ted_distance_matrix(r.trees);
      case Method::LM:
        break;
    }
    LmCache cache(g, cfg.lm);
    std::vector<TreeLM> lms;
    lms.reserve(n);
    for (const auto& t : r.trees) lms.push_back(estimate_tree_lm(cache, t));
    return build_distance_matrix(lms, cfg.lm.gamma);
  });

  r.clustering = in_stage("clustering", [&] {
    if (n == 1) return Clustering::from_assignment({0});
    if (cfg.method == Method::ISO) return isomorphism_clusters(r.trees);
    return select_clustering(r.distances, cfg.k_min, cfg.k_max);
  });

  in_stage("ranking", [&] {
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> sizes;
    for (const auto& t : r.trees) {
      ranks.push_back(t.rank);
      sizes.push_back(t.node_count());
    }
    for (std::size_t i = 0; i < r.rankings.size(); ++i) {
      r.rankings[i] = rank_clusters(r.clustering, ranks, sizes, kAllHeuristics[i]);
    }
    r.pairs = generate_judgment_pairs(r.clustering, r.distances, ranks, cfg.seed);
  });
  return r;
}

nlohmann::json to_json(const PipelineResult& r, const PipelineConfig& cfg, RankingHeuristic heuristic) {
  nlohmann::json trees = nlohmann::json::array();
  for (std::size_t i = 0; i < r.trees.size(); ++i) {
    auto t = to_json(r.trees[i]);
    t["id"] = i;
    trees.push_back(std::move(t));
  }

  nlohmann::json clusters = nlohmann::json::array();
  nlohmann::json rankings = nlohmann::json::object();
  if (!r.trees.empty()) {
    const auto& ranking = r.ranking(heuristic);
    const auto members = r.clustering.members();
    for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
      const auto id = ranking.order[pos];
      clusters.push_back({{"id", id},
                          {"rank_position", pos + 1},
                          {"representative", trees[ranking.representative[id]]},
                          {"trees", members[id]}});
    }
    for (const auto h : kAllHeuristics) rankings[std::string(to_string(h))] = r.ranking(h).order;
  }

  const auto& p = cfg.lm;
  return {{"query", r.query.keywords()},
          {"method", to_string(r.method)},
          {"heuristic", to_string(heuristic)},
          {"k", r.clustering.k},
          {"ch", ch_to_json(r.clustering.ch_value)},
          {"clusters", std::move(clusters)},
          {"rankings", std::move(rankings)},
          {"trees", std::move(trees)},
          {"config",
           {{"top_n", cfg.top_n},
            {"max_edges", cfg.max_edges},
            {"k_min", cfg.k_min},
            {"k_max", cfg.k_max},
            {"lambda", p.lambda},
            {"mu", p.mu},
            {"mu_s", p.mu_s},
            {"mu_o", p.mu_o},
            {"gamma", p.gamma},
            {"seed", cfg.seed}}}};
}

nlohmann::json judgment_pairs_to_json(const PipelineResult& r) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& pair : r.pairs) {
    out.push_back({{"a", pair.a},
                   {"b", pair.b},
                   {"origin", to_string(pair.origin)},
                   {"tree_a", to_json(r.trees[pair.a])},
                   {"tree_b", to_json(r.trees[pair.b])}});
  }
  return out;
}

}  // namespace klustree
