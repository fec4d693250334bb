#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "klustree/errors.hpp"
#include "klustree/evaluation.hpp"
#include "oracles.hpp"

using namespace klustree;

namespace {

double ndcg_oracle(const std::vector<int>& presented) {
  auto dcg = [](const std::vector<int>& g) {
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g[i] / std::log2(static_cast<double>(i) + 2);
    return s;
  };
  auto ideal = presented;
  std::sort(ideal.rbegin(), ideal.rend());
  return dcg(presented) / dcg(ideal);
}

}  // namespace

TEST(Ndcg, WorkedExample) {
  const RelevanceGrades g{{0, 1}, {1, 2}, {2, 3}};
  const std::vector<std::size_t> presented{0, 1, 2};
  EXPECT_NEAR(ndcg(presented, g), 0.7900, 1e-4);
  EXPECT_NEAR(ndcg(presented, g), (1 + 2 / std::log2(3.0) + 1.5) / (3 + 2 / std::log2(3.0) + 0.5), 1e-12);
  const std::vector<std::size_t> best{2, 1, 0};
  EXPECT_DOUBLE_EQ(ndcg(best, g), 1.0);
}

TEST(Ndcg, MatchesOracleOnRandomGrades) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> grade(kMinGrade, kMaxGrade);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    RelevanceGrades g;
    for (std::size_t i = 0; i < n; ++i) g[i] = grade(rng);
    std::vector<int> presented;
    for (auto id : order) presented.push_back(g[id]);
    const double v = ndcg(order, g);
    EXPECT_NEAR(v, ndcg_oracle(presented), 1e-12);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Ndcg, Contract) {
  EXPECT_THROW(ndcg(std::vector<std::size_t>{}, {}), ContractError);
  EXPECT_THROW(ndcg(std::vector<std::size_t>{0, 1}, {{0, 3}}), ContractError);
  EXPECT_THROW(ndcg(std::vector<std::size_t>{0}, {{0, 6}}), ContractError);
  EXPECT_DOUBLE_EQ(ndcg(std::vector<std::size_t>{0}, {{0, 4}}), 1.0);
}

TEST(GradesFile, RoundTripAndValidation) {
  const GradesFile f{"Carter Depp", "lm", {{0, 5}, {1, 2}}};
  const auto back = grades_from_json(to_json(f));
  EXPECT_EQ(back.query, f.query);
  EXPECT_EQ(back.method, f.method);
  EXPECT_EQ(back.grades, f.grades);
  EXPECT_THROW(grades_from_json(nlohmann::json{{"grades", {{"x", 3}}}}), ContractError);
  EXPECT_THROW(grades_from_json(nlohmann::json{{"grades", {{"0", 9}}}}), ContractError);
  EXPECT_THROW(grades_from_json(nlohmann::json{{"grades", 3}}), ContractError);
}

TEST(JudgmentPairs, WithinAndCrossPairs) {
  // clusters {0,1,2} and {3,4}
  const auto c = Clustering::from_assignment({0, 0, 0, 1, 1});
  const auto m = DistanceMatrix::from_rows({{0, 0.1, 0.3, 0.9, 0.9},
                                            {0.1, 0, 0.2, 0.9, 0.9},
                                            {0.3, 0.2, 0, 0.9, 0.9},
                                            {0.9, 0.9, 0.9, 0, 0.4},
                                            {0.9, 0.9, 0.9, 0.4, 0}});
  const std::vector<std::size_t> ranks{3, 1, 2, 5, 4};
  const auto pairs = generate_judgment_pairs(c, m, ranks, 42);

  std::set<std::tuple<std::size_t, std::size_t, PairOrigin>> got;
  for (const auto& p : pairs) got.insert({std::min(p.a, p.b), std::max(p.a, p.b), p.origin});
  const std::set<std::tuple<std::size_t, std::size_t, PairOrigin>> want{
      {0, 2, PairOrigin::WithinMax},
      {0, 1, PairOrigin::WithinMin},
      {3, 4, PairOrigin::WithinMax},
      {1, 4, PairOrigin::CrossRepresentative},
  };
  EXPECT_EQ(got, want);
  EXPECT_EQ(pairs.size(), 4u);
  for (const auto& p : pairs) {
    EXPECT_EQ(p.cluster_a, c.assignment[p.a]);
    EXPECT_EQ(p.cluster_b, c.assignment[p.b]);
  }
}

TEST(JudgmentPairs, SeedControlsOrderOnly) {
  const auto c = Clustering::from_assignment({0, 1, 2, 3, 0, 1, 2, 3});
  std::mt19937_64 rng(1);
  const auto m = oracle::random_matrix(8, rng);
  const std::vector<std::size_t> ranks{1, 2, 3, 4, 5, 6, 7, 8};
  const auto a = generate_judgment_pairs(c, m, ranks, 7);
  EXPECT_EQ(a, generate_judgment_pairs(c, m, ranks, 7));
  bool differs = false;
  for (std::uint64_t seed = 8; seed < 20 && !differs; ++seed) differs = generate_judgment_pairs(c, m, ranks, seed) != a;
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.size(), 4u + 6u);
}

TEST(JudgmentPairs, SizeMismatch) {
  const auto c = Clustering::from_assignment({0, 1});
  const std::vector<std::size_t> ranks{1};
  EXPECT_THROW(generate_judgment_pairs(c, DistanceMatrix(2), ranks, 0), ContractError);
}
