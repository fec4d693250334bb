#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace klustree {

/// One directed labeled edge <subject, predicate, object>.
struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

enum class TermKind : std::uint8_t { Unigram, Bigram };

/// Which position(s) of a triple a term was drawn from. Part of term identity,
/// so a unigram never equals a bigram and the entity-side and relationship-side
/// vocabularies never share a term.
enum class TermRole : std::uint8_t {
  Node,              // entity unigram: a neighbouring node label
  Subject,           // relationship subject unigram
  Object,            // relationship object unigram
  PredicateObject,   // entity bigram (P, O) where the entity is the subject
  SubjectPredicate,  // entity bigram (S, P) where the entity is the object
  SubjectObject,     // relationship bigram (S, O)
};

struct Term {
  TermRole role = TermRole::Node;
  std::string first;
  std::string second;  // empty for unigrams

  static Term node(std::string label) { return {TermRole::Node, std::move(label), {}}; }
  static Term subject(std::string label) { return {TermRole::Subject, std::move(label), {}}; }
  static Term object(std::string label) { return {TermRole::Object, std::move(label), {}}; }
  static Term predicate_object(std::string p, std::string o) {
    return {TermRole::PredicateObject, std::move(p), std::move(o)};
  }
  static Term subject_predicate(std::string s, std::string p) {
    return {TermRole::SubjectPredicate, std::move(s), std::move(p)};
  }
  static Term subject_object(std::string s, std::string o) {
    return {TermRole::SubjectObject, std::move(s), std::move(o)};
  }

  TermKind kind() const noexcept;
  /// Human-readable rendering: `label` or `(first, second)`.
  std::string text() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

std::string_view to_string(TermRole role) noexcept;

/// Term multiset.
using TermCounts = std::map<Term, std::size_t>;

struct EntityTerms {
  TermCounts unigrams;
  TermCounts bigrams;
};

struct RelationshipTerms {
  TermCounts subjects;
  TermCounts objects;
  TermCounts bigrams;
};

/// Immutable, deduplicated triple graph with per-node and per-predicate indexes.
/// Every accessor is const and safe to call concurrently.
class Graph {
 public:
  using NodeId = std::uint32_t;

  /// A triple touching a node, seen from that node.
  struct Incidence {
    std::uint32_t triple;
    NodeId other;
  };

  Graph() = default;

  std::size_t triple_count() const noexcept { return triples_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t predicate_count() const noexcept { return predicates_.size(); }

  /// Triples in lexicographic order.
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  /// Node labels in lexicographic order; NodeId indexes this list.
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& predicates() const noexcept { return predicates_; }

  bool has_node(std::string_view label) const;
  bool has_predicate(std::string_view label) const;
  /// Throws NotFoundError.
  NodeId node_id(std::string_view label) const;
  const std::string& node_label(NodeId id) const { return nodes_.at(id); }

  /// Triples with the node as subject or object, in either direction.
  std::span<const Incidence> incidences(NodeId id) const { return incidences_.at(id); }
  const Triple& triple(std::uint32_t index) const { return triples_.at(index); }

  std::vector<Triple> entity_document(std::string_view entity) const;
  EntityTerms entity_terms(std::string_view entity) const;
  std::vector<Triple> relationship_document(std::string_view predicate) const;
  RelationshipTerms relationship_terms(std::string_view predicate) const;

  /// Occurrences of a term over the whole graph; 0 when absent.
  std::size_t corpus_count(const Term& term) const;

  bool operator==(const Graph& other) const { return triples_ == other.triples_; }

 private:
  friend Graph load_graph(std::istream& source);

  static Graph build(std::vector<Triple> triples);
  const std::vector<std::uint32_t>& node_triples(std::string_view entity) const;

  std::vector<Triple> triples_;
  std::vector<std::string> nodes_;
  std::vector<std::string> predicates_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, std::uint32_t> predicate_index_;
  std::vector<std::vector<std::uint32_t>> node_triples_;       // per node, sorted
  std::vector<std::vector<Incidence>> incidences_;             // per node
  std::vector<std::vector<std::uint32_t>> predicate_triples_;  // per predicate, sorted
};

/// Parses `subject\tpredicate\tobject[\tweight]` lines. Blank lines and lines
/// starting with '#' are skipped; labels are trimmed; duplicates collapse.
/// Throws ParseError or EmptyGraphError.
Graph load_graph(std::istream& source);
Graph load_graph_file(const std::filesystem::path& path);

}  // namespace klustree
