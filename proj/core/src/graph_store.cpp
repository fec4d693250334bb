#include "klustree/graph_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "klustree/errors.hpp"

namespace klustree {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\v\f";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_number(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

TermKind Term::kind() const noexcept {
  switch (role) {
    case TermRole::Node:
    case TermRole::Subject:
    case TermRole::Object:
      return TermKind::Unigram;
    default:
      return TermKind::Bigram;
  }
}

std::string Term::text() const {
  if (kind() == TermKind::Unigram) return first;
  return "(" + first + ", " + second + ")";
}

std::string_view to_string(TermRole role) noexcept {
  switch (role) {
    case TermRole::Node: return "node";
    case TermRole::Subject: return "subject";
    case TermRole::Object: return "object";
    case TermRole::PredicateObject: return "predicate_object";
    case TermRole::SubjectPredicate: return "subject_predicate";
    case TermRole::SubjectObject: return "subject_object";
  }
  return "unknown";
}

Graph load_graph(std::istream& source) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    // Split the raw line so that a trailing empty field still counts.
    auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(line_no, "expected 3 tab-separated fields (optionally a 4th weight), got " +
                                    std::to_string(fields.size()));
    }
    for (auto& f : fields) f = trim(f);
    for (std::size_t i = 0; i < 3; ++i) {
      if (fields[i].empty()) throw ParseError(line_no, "empty label in field " + std::to_string(i + 1));
    }
    if (fields.size() == 4 && !is_number(fields[3])) {
      throw ParseError(line_no, "weight is not a number: \"" + std::string(fields[3]) + "\"");
    }
    if (fields[0] == fields[2]) {
      throw ParseError(line_no, "self-loop on \"" + std::string(fields[0]) + "\"");
    }
    triples.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
  }
  if (source.bad()) throw Error("read failure on graph input");
  if (triples.empty()) throw EmptyGraphError();
  return Graph::build(std::move(triples));
}

Graph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open graph file " + path.string());
  return load_graph(in);
}

Graph Graph::build(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  Graph g;
  g.triples_ = std::move(triples);
  for (const auto& t : g.triples_) {
    g.nodes_.push_back(t.subject);
    g.nodes_.push_back(t.object);
    g.predicates_.push_back(t.predicate);
  }
  for (auto* labels : {&g.nodes_, &g.predicates_}) {
    std::sort(labels->begin(), labels->end());
    labels->erase(std::unique(labels->begin(), labels->end()), labels->end());
  }
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.node_index_.emplace(g.nodes_[i], static_cast<NodeId>(i));
  for (std::size_t i = 0; i < g.predicates_.size(); ++i) {
    g.predicate_index_.emplace(g.predicates_[i], static_cast<std::uint32_t>(i));
  }

  g.node_triples_.resize(g.nodes_.size());
  g.incidences_.resize(g.nodes_.size());
  g.predicate_triples_.resize(g.predicates_.size());
  for (std::uint32_t i = 0; i < g.triples_.size(); ++i) {
    const auto& t = g.triples_[i];
    const auto s = g.node_index_.at(t.subject);
    const auto o = g.node_index_.at(t.object);
    g.node_triples_[s].push_back(i);
    g.node_triples_[o].push_back(i);
    g.incidences_[s].push_back({i, o});
    g.incidences_[o].push_back({i, s});
    g.predicate_triples_[g.predicate_index_.at(t.predicate)].push_back(i);
  }
  return g;
}

bool Graph::has_node(std::string_view label) const {
  return node_index_.contains(std::string(label));
}

bool Graph::has_predicate(std::string_view label) const {
  return predicate_index_.contains(std::string(label));
}

Graph::NodeId Graph::node_id(std::string_view label) const {
  const auto it = node_index_.find(std::string(label));
  if (it == node_index_.end()) throw NotFoundError("unknown entity \"" + std::string(label) + "\"");
  return it->second;
}

const std::vector<std::uint32_t>& Graph::node_triples(std::string_view entity) const {
  return node_triples_[node_id(entity)];
}

std::vector<Triple> Graph::entity_document(std::string_view entity) const {
  std::vector<Triple> doc;
  for (const auto i : node_triples(entity)) doc.push_back(triples_[i]);
  return doc;
}

EntityTerms Graph::entity_terms(std::string_view entity) const {
  EntityTerms terms;
  for (const auto i : node_triples(entity)) {
    const auto& t = triples_[i];
    if (t.subject == entity) {
      ++terms.unigrams[Term::node(t.object)];
      ++terms.bigrams[Term::predicate_object(t.predicate, t.object)];
    } else {
      ++terms.unigrams[Term::node(t.subject)];
      ++terms.bigrams[Term::subject_predicate(t.subject, t.predicate)];
    }
  }
  return terms;
}

std::vector<Triple> Graph::relationship_document(std::string_view predicate) const {
  const auto it = predicate_index_.find(std::string(predicate));
  if (it == predicate_index_.end()) {
    throw NotFoundError("unknown predicate \"" + std::string(predicate) + "\"");
  }
  std::vector<Triple> doc;
  for (const auto i : predicate_triples_[it->second]) doc.push_back(triples_[i]);
  return doc;
}

RelationshipTerms Graph::relationship_terms(std::string_view predicate) const {
  RelationshipTerms terms;
  for (const auto& t : relationship_document(predicate)) {
    ++terms.subjects[Term::subject(t.subject)];
    ++terms.objects[Term::object(t.object)];
    ++terms.bigrams[Term::subject_object(t.subject, t.object)];
  }
  return terms;
}

std::size_t Graph::corpus_count(const Term& term) const {
  const auto it = node_index_.find(term.first);
  if (term.kind() == TermKind::Unigram) {
    return it == node_index_.end() ? 0 : node_triples_[it->second].size();
  }

  // Bigrams are anchored on a node that the counted triples must touch.
  const std::string& anchor = term.role == TermRole::PredicateObject ? term.second : term.first;
  const auto anchor_it = node_index_.find(anchor);
  if (anchor_it == node_index_.end()) return 0;
  std::size_t count = 0;
  for (const auto i : node_triples_[anchor_it->second]) {
    const auto& t = triples_[i];
    switch (term.role) {
      case TermRole::PredicateObject:
        count += t.predicate == term.first && t.object == term.second;
        break;
      case TermRole::SubjectPredicate:
        count += t.subject == term.first && t.predicate == term.second;
        break;
      case TermRole::SubjectObject:
        count += t.subject == term.first && t.object == term.second;
        break;
      default:
        break;
    }
  }
  return count;
}

}  // namespace klustree
