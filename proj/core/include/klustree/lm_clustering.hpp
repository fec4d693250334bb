#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "klustree/language_models.hpp"

namespace klustree {

/// Base-2 Jensen-Shannon divergence over the union of supports; in [0, 1].
/// Throws ContractError on mismatched sides or an empty model.
double js_divergence(const LanguageModel& p, const LanguageModel& q);

/// gamma * JS(entity) + (1 - gamma) * JS(relationship). When either tree has no
/// relationship model the entity divergence alone is returned.
double tree_distance(const TreeLM& a, const TreeLM& b, double gamma);

/// Symmetric n x n matrix of non-negative distances with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}
  /// Throws ContractError unless `rows` is square, symmetric, non-negative, zero-diagonal.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);
  bool all_zero() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix build_distance_matrix(std::span<const TreeLM> trees, double gamma);

/// One agglomeration step. Leaves are clusters 0..n-1; the merge at step s
/// creates cluster n + s.
struct Merge {
  std::size_t left;
  std::size_t right;
  double height;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  /// Assignment after applying the first n - k merges, ids by first member.
  std::vector<std::size_t> cut(std::size_t k) const;
};

/// Complete linkage; ties go to the smallest (first id, second id) pair.
/// Throws DegenerateInputError for fewer than two trees.
Dendrogram complete_link_dendrogram(const DistanceMatrix& m);

/// Partition of tree indices into clusters 0..k-1.
struct Clustering {
  static constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

  std::size_t k = 0;
  std::vector<std::size_t> assignment;
  double ch_value = kUndefined;

  /// Relabels ids in order of first occurrence. Throws ContractError on an empty input.
  static Clustering from_assignment(std::vector<std::size_t> assignment);
  std::vector<std::vector<std::size_t>> members() const;
};

/// (N - K) B / ((K - 1) W) over pairwise divergences. Requires 2 <= K <= N - 1;
/// returns +infinity when W is 0.
double ch_index(const DistanceMatrix& m, const Clustering& c);

/// Best CH cut of the complete-link dendrogram for K in
/// [max(2, k_min), min(k_max, n - 1)], smallest K on ties. All-zero matrices
/// give one cluster; two trees give two.
Clustering select_clustering(const DistanceMatrix& m, std::size_t k_min, std::size_t k_max);

enum class RankingHeuristic { Best, Worst, Average, LargestSize };

inline constexpr RankingHeuristic kAllHeuristics[] = {RankingHeuristic::Best, RankingHeuristic::Worst,
                                                      RankingHeuristic::Average, RankingHeuristic::LargestSize};

/// "best", "worst", "avg", "size".
std::string_view to_string(RankingHeuristic h) noexcept;
/// Accepts the names above plus "average" and "largest"; throws ContractError.
RankingHeuristic parse_heuristic(std::string_view name);

struct ClusterRanking {
  RankingHeuristic heuristic = RankingHeuristic::Best;
  std::vector<std::size_t> order;           // cluster ids, best first
  std::vector<std::size_t> representative;  // per cluster id: best-ranked member tree
};

/// Orders clusters by their members' search ranks (or tree sizes). Ties fall
/// back to ascending cluster id.
ClusterRanking rank_clusters(const Clustering& c, std::span<const std::size_t> tree_ranks,
                             std::span<const std::size_t> tree_sizes, RankingHeuristic h);

}  // namespace klustree
