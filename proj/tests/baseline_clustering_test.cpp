#include <gtest/gtest.h>

#include <set>

#include "klustree/baseline_clustering.hpp"
#include "klustree/errors.hpp"
#include "oracles.hpp"

using namespace klustree;

namespace {

AnswerTree make_tree(std::string root, std::vector<Triple> edges) {
  std::sort(edges.begin(), edges.end());
  return {std::move(root), std::move(edges), 0, 0.0};
}

AnswerTree chain(const std::string& a, const std::string& b, const std::string& c) {
  return make_tree(a, {{a, "p", b}, {b, "p", c}});
}

std::vector<OrderedTree> canonical_trees(std::size_t max_nodes) {
  std::set<std::string> seen;
  std::vector<OrderedTree> out;
  for (auto t : oracle::all_ordered_trees(max_nodes, {"a", "b"})) {
    t = canonicalize(std::move(t));
    std::function<std::string(const OrderedTree&)> enc = [&](const OrderedTree& x) {
      std::string s = x.label + "(";
      for (const auto& c : x.children) s += enc(c);
      return s + ")";
    };
    if (seen.insert(enc(t)).second) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST(CanonicalForm, StarsMatchAcrossLabelsAndOrientation) {
  const auto a = make_tree("Corpse Bride", {{"Helena Carter", "ActedIn", "Corpse Bride"}, {"Johnny Depp", "ActedIn", "Corpse Bride"}});
  const auto b = make_tree("Dark Shadows", {{"Dark Shadows", "x", "Helena Carter"}, {"Johnny Depp", "ActedIn", "Dark Shadows"}});
  EXPECT_EQ(canonical_form(a), canonical_form(b));
  const auto path_end = make_tree("A", {{"A", "p", "B"}, {"B", "p", "C"}});
  EXPECT_NE(canonical_form(a), canonical_form(path_end));
  EXPECT_EQ(canonical_form(make_tree("x", {})), canonical_form(make_tree("y", {})));
}

TEST(CanonicalForm, MatchesPermutationBruteForce) {
  std::vector<oracle::ParentArray> shapes;
  for (std::size_t n = 1; n <= 5; ++n)
    for (auto& p : oracle::all_parent_arrays(n)) shapes.push_back(std::move(p));
  for (std::size_t i = 0; i < shapes.size(); ++i)
    for (std::size_t j = 0; j < shapes.size(); ++j) {
      const auto a = oracle::tree_from_parents(shapes[i], "a", i * 7 + 1);
      const auto b = oracle::tree_from_parents(shapes[j], "b", j * 5 + 2);
      EXPECT_EQ(canonical_form(a) == canonical_form(b), oracle::isomorphic_brute(shapes[i], shapes[j])) << i << ' ' << j;
    }
}

TEST(IsomorphismClusters, GroupsByShape) {
  const auto star1 = make_tree("c", {{"a", "p", "c"}, {"b", "p", "c"}});
  const auto star2 = make_tree("z", {{"x", "q", "z"}, {"y", "q", "z"}});
  const auto path = make_tree("b", {{"a", "p", "b"}, {"b", "p", "c"}, {"c", "p", "d"}});
  const std::vector<AnswerTree> trees{star1, path, star2};
  const auto c = isomorphism_clusters(trees);
  EXPECT_EQ(c.k, 2u);
  EXPECT_EQ(c.assignment, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_TRUE(std::isnan(c.ch_value));
  const auto m = isomorphism_distance_matrix(trees);
  EXPECT_DOUBLE_EQ(m(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
  EXPECT_THROW(isomorphism_clusters(std::span<const AnswerTree>{}), ContractError);
}

TEST(TreeEditDistance, SpotValues) {
  EXPECT_EQ(tree_edit_distance(chain("a", "b", "c"), chain("a", "b", "c")), 0u);
  EXPECT_EQ(tree_edit_distance(chain("a", "b", "c"), chain("a", "b", "d")), 1u);
  EXPECT_EQ(tree_edit_distance(chain("a", "b", "c"), make_tree("a", {})), 2u);
  EXPECT_NEAR(edit_similarity(chain("a", "b", "c"), chain("a", "b", "d")), 1.0 - 1.0 / 6, 1e-12);
  EXPECT_DOUBLE_EQ(edit_similarity(chain("a", "b", "c"), chain("a", "b", "c")), 1.0);
}

TEST(TreeEditDistance, ClassicOrderedExample) {
  // f(d(a c(b)) e) vs f(c(d(a b)) e): distance 2
  const OrderedTree t1{"f", {{"d", {{"a", {}}, {"c", {{"b", {}}}}}}, {"e", {}}}};
  const OrderedTree t2{"f", {{"c", {{"d", {{"a", {}}, {"b", {}}}}}}, {"e", {}}}};
  EXPECT_EQ(ordered_tree_edit_distance(t1, t2), 2u);
  EXPECT_EQ(oracle::ted_brute(t1, t2), 2u);
}

TEST(TreeEditDistance, MatchesExhaustiveSearch) {
  const auto trees = canonical_trees(4);
  ASSERT_GT(trees.size(), 30u);
  for (const auto& a : trees)
    for (const auto& b : trees) {
      const auto d = ordered_tree_edit_distance(a, b);
      ASSERT_EQ(d, oracle::ted_brute(a, b));
      ASSERT_EQ(d, ordered_tree_edit_distance(b, a));
    }
}

TEST(TreeEditDistance, IgnoresChildOrder) {
  const auto a = make_tree("r", {{"r", "p", "x"}, {"r", "p", "y"}});
  const auto b = make_tree("r", {{"r", "p", "y"}, {"r", "p", "x"}});
  EXPECT_EQ(tree_edit_distance(a, b), 0u);
  EXPECT_EQ(to_ordered_tree(a).children.size(), 2u);
  EXPECT_EQ(to_ordered_tree(a).children[0].label, "p|x");
}

TEST(ColumnSimilarity, SpotValues) {
  const std::vector<AnswerTree> trees{chain("a", "b", "c"), chain("a", "b", "d")};
  const auto m = edit_similarity_matrix(trees);
  const double s = 1.0 - 1.0 / 6;
  EXPECT_NEAR(m(0, 1), s, 1e-12);
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_NEAR(column_similarity(m, 0, 1), s, 1e-12);
  EXPECT_DOUBLE_EQ(column_similarity(m, 1, 1), 1.0);

  SimilarityMatrix far(2);
  far.set(0, 1, 0.0);
  EXPECT_DOUBLE_EQ(column_similarity(far, 0, 1), 0.0);
}

TEST(TedClusters, SeparatesShapes) {
  const std::vector<AnswerTree> trees{chain("a", "b", "c"), chain("a", "b", "d"),
                                      make_tree("q", {{"q", "r", "w"}, {"q", "r", "x"}, {"q", "r", "y"}, {"q", "r", "z"}}),
                                      make_tree("q", {{"q", "r", "w"}, {"q", "r", "x"}, {"q", "r", "y"}, {"q", "r", "v"}})};
  const auto m = ted_distance_matrix(trees);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(m(i, i), 0.0);
  const auto c = ted_clusters(trees, 2, 15);
  EXPECT_EQ(c.k, 2u);
  EXPECT_EQ(c.assignment, (std::vector<std::size_t>{0, 0, 1, 1}));
}
