#include <gtest/gtest.h>

#include <sstream>

#include "klustree/errors.hpp"
#include "klustree/graph_store.hpp"
#include "oracles.hpp"

using namespace klustree;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return load_graph(in);
}

}  // namespace

TEST(GraphStore, LoadsMiniFixture) {
  const auto g = load_graph_file(oracle::data_path("mini_imdb.tsv"));
  EXPECT_EQ(g.triple_count(), 6u);
  EXPECT_EQ(g.node_count(), 7u);
  EXPECT_EQ(g.predicate_count(), 3u);
  EXPECT_TRUE(g.has_node("CorpseBride"));
  EXPECT_TRUE(g.has_predicate("ActedIn"));
  EXPECT_FALSE(g.has_node("Actedin"));
  EXPECT_TRUE(std::is_sorted(g.nodes().begin(), g.nodes().end()));
  EXPECT_TRUE(std::is_sorted(g.triples().begin(), g.triples().end()));
}

TEST(GraphStore, SkipsCommentsAndBlankLinesAndTrims) {
  const auto g = parse("# header\n\n  A \tp\t B\n\nB\tq\tC\t0.5\n");
  EXPECT_EQ(g.triple_count(), 2u);
  EXPECT_TRUE(g.has_node("A"));
  EXPECT_TRUE(g.has_node("B"));
}

TEST(GraphStore, DuplicatesCollapse) {
  const auto g = parse("A\tp\tB\nA\tp\tB\nA\tp\tB\t2\n");
  EXPECT_EQ(g.triple_count(), 1u);
}

TEST(GraphStore, WrongFieldCountReportsLine) {
  try {
    parse("A\tp\tB\nA\tp\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("A\tp\tB\tx\ty\n"), ParseError);
}

TEST(GraphStore, RejectsBadWeightEmptyLabelAndSelfLoop) {
  EXPECT_THROW(parse("A\tp\tB\theavy\n"), ParseError);
  EXPECT_THROW(parse("A\t \tB\n"), ParseError);
  EXPECT_THROW(parse("A\tp\tA\n"), ParseError);
}

TEST(GraphStore, EmptyInputIsAnError) {
  EXPECT_THROW(parse(""), EmptyGraphError);
  EXPECT_THROW(parse("# only a comment\n\n"), EmptyGraphError);
}

TEST(GraphStore, MissingFileIsNotFound) {
  EXPECT_THROW(load_graph_file(oracle::data_path("nope.tsv")), NotFoundError);
}

TEST(GraphStore, LoadOrderDoesNotMatter) {
  EXPECT_EQ(parse("A\tp\tB\nC\tq\tD\n"), parse("C\tq\tD\nA\tp\tB\n"));
}

TEST(GraphStore, IncidencesSeeBothDirections) {
  const auto g = load_graph_file(oracle::data_path("mini_imdb.tsv"));
  const auto cb = g.node_id("CorpseBride");
  std::set<std::string> others;
  for (const auto& inc : g.incidences(cb)) others.insert(g.node_label(inc.other));
  EXPECT_EQ(others, (std::set<std::string>{"English", "HelenaCarter", "JohnnyDepp", "TimBurton"}));
  EXPECT_THROW(g.node_id("Nobody"), NotFoundError);
}

TEST(GraphStore, EntityDocumentAndTerms) {
  const auto g = load_graph_file(oracle::data_path("mini_imdb.tsv"));
  EXPECT_EQ(g.entity_document("CorpseBride").size(), 4u);
  const auto terms = g.entity_terms("CorpseBride");
  EXPECT_EQ(terms.unigrams.size(), 4u);
  EXPECT_EQ(terms.unigrams.at(Term::node("TimBurton")), 1u);
  EXPECT_EQ(terms.bigrams.at(Term::predicate_object("DirectedBy", "TimBurton")), 1u);
  EXPECT_EQ(terms.bigrams.at(Term::subject_predicate("JohnnyDepp", "ActedIn")), 1u);
  EXPECT_THROW(g.entity_terms("Nobody"), NotFoundError);
}

TEST(GraphStore, RelationshipDocumentAndTerms) {
  const auto g = load_graph_file(oracle::data_path("mini_imdb.tsv"));
  EXPECT_EQ(g.relationship_document("ActedIn").size(), 4u);
  const auto terms = g.relationship_terms("ActedIn");
  EXPECT_EQ(terms.subjects.at(Term::subject("JohnnyDepp")), 3u);
  EXPECT_EQ(terms.objects.at(Term::object("CorpseBride")), 2u);
  EXPECT_EQ(terms.bigrams.size(), 4u);
  EXPECT_THROW(g.relationship_terms("Nope"), NotFoundError);
}

TEST(GraphStore, CorpusCounts) {
  const auto g = load_graph_file(oracle::data_path("mini_imdb.tsv"));
  EXPECT_EQ(g.corpus_count(Term::node("JohnnyDepp")), 3u);
  EXPECT_EQ(g.corpus_count(Term::node("CorpseBride")), 4u);
  EXPECT_EQ(g.corpus_count(Term::node("Nobody")), 0u);
  EXPECT_EQ(g.corpus_count(Term::predicate_object("ActedIn", "CorpseBride")), 2u);
  EXPECT_EQ(g.corpus_count(Term::subject_object("JohnnyDepp", "SleepyHollow")), 1u);
}

TEST(GraphStore, EntityDocumentSizeEqualsUnigramCorpusCount) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = parse(oracle::random_graph_tsv(rng, 50));
    for (const auto& n : g.nodes()) EXPECT_EQ(g.entity_document(n).size(), g.corpus_count(Term::node(n)));
  }
}

TEST(GraphStore, TermKindsAndText) {
  EXPECT_EQ(Term::node("x").kind(), TermKind::Unigram);
  EXPECT_EQ(Term::subject("x").kind(), TermKind::Unigram);
  EXPECT_EQ(Term::subject_object("x", "y").kind(), TermKind::Bigram);
  EXPECT_EQ(Term::node("x").text(), "x");
  EXPECT_NE(Term::subject("x"), Term::object("x"));
}
