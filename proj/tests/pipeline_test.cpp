#include <gtest/gtest.h>

#include "klustree/errors.hpp"
#include "klustree/pipeline.hpp"
#include "oracles.hpp"

using namespace klustree;

namespace {

const Graph& graph(const std::string& name) {
  static std::map<std::string, Graph> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, load_graph_file(oracle::data_path(name))).first;
  return it->second;
}

std::size_t tree_with_node(const PipelineResult& r, const std::string& label) {
  for (std::size_t i = 0; i < r.trees.size(); ++i)
    for (const auto& n : r.trees[i].nodes())
      if (n == label) return i;
  return r.trees.size();
}

PipelineConfig config(Method m) {
  PipelineConfig cfg;
  cfg.method = m;
  return cfg;
}

}  // namespace

TEST(Pipeline, MethodNames) {
  EXPECT_EQ(parse_method("LM"), Method::LM);
  EXPECT_EQ(parse_method("iso"), Method::ISO);
  EXPECT_EQ(parse_method("isomorphism"), Method::ISO);
  EXPECT_EQ(parse_method("ted"), Method::TED);
  EXPECT_THROW(parse_method("kmeans"), ContractError);
}

TEST(Pipeline, CarterDeppSeparatesProducerTree) {
  const auto r = run_pipeline(graph("mini_imdb_extended.tsv"), config(Method::LM), KeywordQuery({"Carter", "Depp"}));
  ASSERT_EQ(r.trees.size(), 2u);
  EXPECT_GE(r.clustering.k, 2u);
  const auto coactor = tree_with_node(r, "Corpse Bride");
  const auto producer = tree_with_node(r, "John Carter");
  ASSERT_LT(coactor, r.trees.size());
  ASSERT_LT(producer, r.trees.size());
  EXPECT_NE(r.clustering.assignment[coactor], r.clustering.assignment[producer]);
}

TEST(Pipeline, ProducerTreeStandsAloneOnRicherGraph) {
  const auto r = run_pipeline(graph("figure1_imdb.tsv"), config(Method::LM), KeywordQuery({"Carter", "Depp"}));
  const auto producer = tree_with_node(r, "John Carter");
  ASSERT_LT(producer, r.trees.size());
  const auto members = r.clustering.members()[r.clustering.assignment[producer]];
  EXPECT_EQ(members, std::vector<std::size_t>{producer});
}

TEST(Pipeline, AwardTreeIsomorphicButSemanticallyApart) {
  const KeywordQuery q({"Brad Pitt", "David Fincher"});
  const auto& g = graph("pitt_fincher.tsv");
  const auto iso = run_pipeline(g, config(Method::ISO), q);
  ASSERT_EQ(iso.trees.size(), 3u);
  EXPECT_EQ(iso.clustering.k, 1u);

  const auto lm = run_pipeline(g, config(Method::LM), q);
  const auto award = tree_with_node(lm, "56th Annual Primetime Emmy Awards");
  ASSERT_LT(award, lm.trees.size());
  EXPECT_EQ(lm.clustering.k, 2u);
  EXPECT_EQ(lm.clustering.members()[lm.clustering.assignment[award]], std::vector<std::size_t>{award});
}

TEST(Pipeline, DeterministicJson) {
  for (auto m : {Method::LM, Method::ISO, Method::TED}) {
    auto cfg = config(m);
    cfg.seed = 17;
    const KeywordQuery q({"Carter", "Depp"});
    const auto a = to_json(run_pipeline(graph("figure1_imdb.tsv"), cfg, q), cfg, cfg.heuristic).dump();
    const auto b = to_json(run_pipeline(graph("figure1_imdb.tsv"), cfg, q), cfg, cfg.heuristic).dump();
    EXPECT_EQ(a, b);
  }
}

TEST(Pipeline, DocumentShape) {
  const auto cfg = config(Method::LM);
  const auto r = run_pipeline(graph("figure1_imdb.tsv"), cfg, KeywordQuery({"Carter", "Depp"}));
  const auto j = to_json(r, cfg, RankingHeuristic::Worst);
  EXPECT_EQ(j.at("method"), "lm");
  EXPECT_EQ(j.at("heuristic"), "worst");
  EXPECT_EQ(j.at("k"), r.clustering.k);
  ASSERT_EQ(j.at("clusters").size(), r.clustering.k);
  const auto& order = r.ranking(RankingHeuristic::Worst).order;
  std::size_t listed = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& c = j.at("clusters")[i];
    EXPECT_EQ(c.at("id"), order[i]);
    EXPECT_EQ(c.at("rank_position"), i + 1);
    EXPECT_TRUE(c.at("representative").contains("edges"));
    listed += c.at("trees").size();
  }
  EXPECT_EQ(listed, r.trees.size());
  for (const char* h : {"best", "worst", "avg", "size"}) EXPECT_TRUE(j.at("rankings").contains(h));
  EXPECT_EQ(j.at("config").at("top_n"), 25);
  EXPECT_EQ(j.at("trees").size(), r.trees.size());
}

TEST(Pipeline, ChSentinels) {
  const auto cfg = config(Method::ISO);
  const auto iso = run_pipeline(graph("pitt_fincher.tsv"), cfg, KeywordQuery({"Brad Pitt", "David Fincher"}));
  EXPECT_TRUE(to_json(iso, cfg, cfg.heuristic).at("ch").is_null());
}

TEST(Pipeline, UnmatchedKeywordIsStageTagged) {
  try {
    run_pipeline(graph("mini_imdb.tsv"), config(Method::LM), KeywordQuery({"Depp", "Gandalf"}));
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "search");
    EXPECT_EQ(e.keyword(), "Gandalf");
  }
}

TEST(Pipeline, BadConfigIsStageTagged) {
  auto cfg = config(Method::LM);
  cfg.k_min = 9;
  cfg.k_max = 3;
  try {
    run_pipeline(graph("mini_imdb.tsv"), cfg, KeywordQuery({"Depp", "Carter"}));
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
}

TEST(Pipeline, ExternalTreesMatchSearch) {
  const auto cfg = config(Method::LM);
  const KeywordQuery q({"Carter", "Depp"});
  const auto searched = run_pipeline(graph("figure1_imdb.tsv"), cfg, q);
  auto trees = searched.trees;
  for (auto& t : trees) t.rank = 0;
  const auto supplied = run_pipeline(graph("figure1_imdb.tsv"), cfg, q, trees);
  EXPECT_EQ(to_json(supplied, cfg, cfg.heuristic).dump(), to_json(searched, cfg, cfg.heuristic).dump());
}

TEST(Pipeline, InvalidExternalTree) {
  AnswerTree t;
  t.root = "Corpse Bride";
  t.edges = {{"Helena Carter", "ActedIn", "Nowhere"}};
  EXPECT_THROW(run_pipeline(graph("figure1_imdb.tsv"), config(Method::LM), KeywordQuery({"Carter", "Depp"}), {t}),
               StageError);
}

TEST(Pipeline, SingleTreeIsOneCluster) {
  auto cfg = config(Method::TED);
  cfg.top_n = 1;
  const auto r = run_pipeline(graph("figure1_imdb.tsv"), cfg, KeywordQuery({"Carter", "Depp"}));
  ASSERT_EQ(r.trees.size(), 1u);
  EXPECT_EQ(r.clustering.k, 1u);
  EXPECT_TRUE(r.pairs.empty());
}

TEST(Pipeline, JudgmentPairsJson) {
  const auto cfg = config(Method::LM);
  const auto r = run_pipeline(graph("figure1_imdb.tsv"), cfg, KeywordQuery({"Carter", "Depp"}));
  const auto j = judgment_pairs_to_json(r);
  ASSERT_EQ(j.size(), r.pairs.size());
  ASSERT_FALSE(j.empty());
  EXPECT_TRUE(j[0].contains("tree_a"));
  EXPECT_TRUE(j[0].contains("origin"));
}
