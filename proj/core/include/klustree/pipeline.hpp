#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "klustree/evaluation.hpp"
#include "klustree/keyword_search.hpp"
#include "klustree/language_models.hpp"
#include "klustree/lm_clustering.hpp"

namespace klustree {

enum class Method { LM, ISO, TED };

std::string_view to_string(Method m) noexcept;
/// "lm", "iso", "ted" (case-insensitive); throws ContractError.
Method parse_method(std::string_view name);

struct PipelineConfig {
  std::filesystem::path graph_path;
  LMParams lm;
  std::size_t top_n = 25;
  std::size_t max_edges = 4;
  std::size_t k_min = 2;
  std::size_t k_max = 15;
  RankingHeuristic heuristic = RankingHeuristic::Best;
  Method method = Method::LM;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PipelineResult {
  KeywordQuery query;
  Method method = Method::LM;
  std::vector<AnswerTree> trees;
  DistanceMatrix distances;
  Clustering clustering;
  std::array<ClusterRanking, 4> rankings;  // indexed like kAllHeuristics
  std::vector<JudgmentPair> pairs;

  const ClusterRanking& ranking(RankingHeuristic h) const;
};

/// search -> top_n trees -> distances -> clustering -> rankings -> judgment
/// pairs. Module errors are rethrown as StageError naming the failing stage.
PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg, const KeywordQuery& q);

/// Same, over externally supplied answer trees (each validated against `g`).
PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg, const KeywordQuery& q,
                            std::vector<AnswerTree> trees);

/// The clustering document, clusters ordered by `heuristic`; all four
/// rankings are included under "rankings".
nlohmann::json to_json(const PipelineResult& r, const PipelineConfig& cfg, RankingHeuristic heuristic);

/// Judgment pairs with both trees serialized.
nlohmann::json judgment_pairs_to_json(const PipelineResult& r);

}  // namespace klustree
