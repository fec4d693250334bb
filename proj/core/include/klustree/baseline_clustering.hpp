#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "klustree/keyword_search.hpp"
#include "klustree/lm_clustering.hpp"

namespace klustree {

/// Label-free encoding of a rooted unordered tree. Edge orientation is ignored.
struct CanonicalForm {
  std::string encoding;
  bool operator==(const CanonicalForm&) const = default;
  auto operator<=>(const CanonicalForm&) const = default;
};

CanonicalForm canonical_form(const AnswerTree& t);

/// Trees share a cluster iff their canonical forms are equal; ids by first occurrence.
Clustering isomorphism_clusters(std::span<const AnswerTree> trees);

/// 0 between isomorphic trees, 1 otherwise.
DistanceMatrix isomorphism_distance_matrix(std::span<const AnswerTree> trees);

/// Ordered labeled tree used for edit distance.
struct OrderedTree {
  std::string label;
  std::vector<OrderedTree> children;

  std::size_t size() const;
  bool operator==(const OrderedTree&) const = default;
};

/// Sorts children recursively by (label, subtree encoding).
OrderedTree canonicalize(OrderedTree t);

/// Hangs the tree from its root; each child's label becomes "predicate|node".
/// The result is canonicalized.
OrderedTree to_ordered_tree(const AnswerTree& t);

/// Zhang-Shasha edit distance with unit relabel/insert/delete costs.
std::size_t ordered_tree_edit_distance(const OrderedTree& a, const OrderedTree& b);

/// Edit distance between the canonicalized ordered forms of two answer trees.
std::size_t tree_edit_distance(const AnswerTree& a, const AnswerTree& b);

/// 1 - TED / (nodes(a) + nodes(b)).
double edit_similarity(const AnswerTree& a, const AnswerTree& b);

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), s_(n * n, 1.0) {}
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return s_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value) {
    s_[i * n_ + j] = value;
    s_[j * n_ + i] = value;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> s_;
};

SimilarityMatrix edit_similarity_matrix(std::span<const AnswerTree> trees);

/// 1 - sum_k |M[i][k] - M[j][k]| / n.
double column_similarity(const SimilarityMatrix& m, std::size_t i, std::size_t j);

/// Pairwise 1 - column_similarity.
DistanceMatrix ted_distance_matrix(std::span<const AnswerTree> trees);

/// Complete-link + CH selection over the column-similarity distances.
Clustering ted_clusters(std::span<const AnswerTree> trees, std::size_t k_min, std::size_t k_max);

}  // namespace klustree
