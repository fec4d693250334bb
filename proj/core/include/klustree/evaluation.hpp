#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "klustree/lm_clustering.hpp"

namespace klustree {

enum class PairOrigin { WithinMax, WithinMin, CrossRepresentative };

std::string_view to_string(PairOrigin origin) noexcept;

/// Two trees shown side by side to a judge.
struct JudgmentPair {
  std::size_t a = 0;
  std::size_t b = 0;
  PairOrigin origin = PairOrigin::WithinMax;
  std::size_t cluster_a = 0;
  std::size_t cluster_b = 0;

  bool operator==(const JudgmentPair&) const = default;
};

/// For every cluster with two or more members, its most and least distant
/// pairs (one pair when they coincide); for every pair of clusters, their
/// representatives. Output is shuffled by `seed`.
std::vector<JudgmentPair> generate_judgment_pairs(const Clustering& c, const DistanceMatrix& m,
                                                  std::span<const std::size_t> tree_ranks, std::uint64_t seed);

/// Relevance grade (1..5) per cluster id.
using RelevanceGrades = std::map<std::size_t, int>;

inline constexpr int kMinGrade = 1;
inline constexpr int kMaxGrade = 5;

/// Linear gain, 1/log2(position + 1) discount, normalized by the ideal order.
/// Throws ContractError on an empty order, a missing grade, or a grade out of scale.
double ndcg(std::span<const std::size_t> order, const RelevanceGrades& grades);

struct GradesFile {
  std::string query;
  std::string method;
  RelevanceGrades grades;
};

/// `{ "query": ..., "method": ..., "grades": { "<cluster id>": 1..5 } }`.
GradesFile grades_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GradesFile& g);

}  // namespace klustree
