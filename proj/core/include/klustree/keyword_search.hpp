#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "klustree/graph_store.hpp"

namespace klustree {

/// Two or more keywords, distinct after case-folding.
class KeywordQuery {
 public:
  /// Trims each keyword. Throws ContractError on fewer than two keywords,
  /// an empty keyword, or a case-insensitive duplicate.
  explicit KeywordQuery(std::vector<std::string> keywords);

  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  std::size_t size() const noexcept { return keywords_.size(); }

 private:
  std::vector<std::string> keywords_;
};

/// A rooted tree over graph edges. Edges keep their stored orientation; the
/// tree structure itself is undirected.
struct AnswerTree {
  std::string root;
  std::vector<Triple> edges;  // sorted
  std::size_t rank = 0;       // 1-based position in the result list
  double score = 0.0;

  /// Root first, then breadth-first with neighbours in label order.
  std::vector<std::string> nodes() const;
  std::size_t node_count() const noexcept { return edges.size() + 1; }
  /// Label-level identity of the tree: sorted edges, or the single node.
  std::string serialization() const;
};

/// Case-insensitive substring test used for keyword-to-node matching.
bool label_matches(std::string_view label, std::string_view keyword);

/// Node labels containing `keyword` case-insensitively, in label order.
std::vector<std::string> match_keyword(const Graph& g, std::string_view keyword);

/// Empty when `t` is a tree over `g` covering every keyword; otherwise a reason.
std::optional<std::string> validate_answer_tree(const Graph& g, const AnswerTree& t,
                                                const KeywordQuery& q);

/// True iff no proper subtree of `t` still covers every keyword.
bool is_minimal(const Graph& g, const AnswerTree& t, const KeywordQuery& q);

struct SearchOptions {
  std::size_t limit = 25;
  /// Largest answer tree considered, in edges.
  std::size_t max_edges = 4;
};

/// Minimal answer trees ordered by (edge count, serialization), truncated to
/// `limit`, with ranks 1..m. Each tree is rooted at its centre. Throws
/// UnmatchedKeywordError when a keyword matches nothing.
std::vector<AnswerTree> enumerate_answer_trees(const Graph& g, const KeywordQuery& q,
                                               const SearchOptions& options = {});

nlohmann::json to_json(const AnswerTree& t);
AnswerTree answer_tree_from_json(const nlohmann::json& j);
nlohmann::json answer_trees_to_json(const KeywordQuery& q, const std::vector<AnswerTree>& trees);

struct AnswerTreeList {
  KeywordQuery query;
  std::vector<AnswerTree> trees;
};
/// Inverse of answer_trees_to_json; throws ContractError on schema violations.
AnswerTreeList answer_trees_from_json(const nlohmann::json& j);

}  // namespace klustree
