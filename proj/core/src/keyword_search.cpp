#include "klustree/keyword_search.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <set>

#include "klustree/errors.hpp"
#include "klustree/tree_shape.hpp"

namespace klustree {

namespace {

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

bool covers_all(const std::vector<std::string>& labels, const KeywordQuery& q) {
  return std::all_of(q.keywords().begin(), q.keywords().end(), [&](const std::string& k) {
    return std::any_of(labels.begin(), labels.end(),
                       [&](const std::string& label) { return label_matches(label, k); });
  });
}

// Centre of the tree; between two centres pick the smaller shape, then label.
std::string centre_of(const std::vector<Triple>& edges, const std::string& fallback) {
  if (edges.empty()) return fallback;
  const auto adjacency = tree_adjacency(edges);
  std::vector<std::string> best;
  std::size_t best_ecc = std::numeric_limits<std::size_t>::max();
  for (const auto& [node, _] : adjacency) {
    std::map<std::string, std::size_t> depth{{node, 0}};
    std::deque<std::string> queue{node};
    std::size_t ecc = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      ecc = std::max(ecc, depth[u]);
      for (const auto& [v, edge] : adjacency.at(u)) {
        if (depth.emplace(v, depth[u] + 1).second) queue.push_back(v);
      }
    }
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = {node};
    } else if (ecc == best_ecc) {
      best.push_back(node);
    }
  }
  return *std::min_element(best.begin(), best.end(), [&](const std::string& a, const std::string& b) {
    const auto ea = shape_encoding(adjacency, a);
    const auto eb = shape_encoding(adjacency, b);
    return ea != eb ? ea < eb : a < b;
  });
}

// A simple path from a connector node, as triple indices.
using Path = std::vector<std::uint32_t>;

class TreeEnumerator {
 public:
  TreeEnumerator(const Graph& g, const KeywordQuery& q, std::size_t max_edges)
      : g_(g), q_(q), max_edges_(max_edges) {}

  std::vector<AnswerTree> run() {
    const std::size_t n = q_.size();
    matched_.resize(n);
    distance_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& keyword = q_.keywords()[i];
      for (const auto& label : match_keyword(g_, keyword)) matched_[i].push_back(g_.node_id(label));
      if (matched_[i].empty()) throw UnmatchedKeywordError(keyword);
      distance_[i] = bounded_bfs(matched_[i]);
    }

    for (const auto& [root, d0] : distance_[0]) {
      bool reachable = true;
      for (std::size_t i = 1; i < n && reachable; ++i) reachable = distance_[i].contains(root);
      if (!reachable) continue;

      std::vector<std::vector<Path>> paths(n);
      for (std::size_t i = 0; i < n; ++i) {
        Path current;
        std::set<Graph::NodeId> on_path{root};
        collect_paths(i, root, current, on_path, paths[i]);
      }
      std::vector<std::uint32_t> edges;
      combine(root, paths, 0, edges);
    }

    std::vector<AnswerTree> trees;
    for (const auto& edge_set : found_) trees.push_back(make_tree(edge_set));
    return trees;
  }

 private:
  std::map<Graph::NodeId, std::size_t> bounded_bfs(const std::vector<Graph::NodeId>& sources) const {
    std::map<Graph::NodeId, std::size_t> dist;
    std::deque<Graph::NodeId> queue;
    for (const auto s : sources) {
      dist.emplace(s, 0);
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      const auto du = dist.at(u);
      if (du == max_edges_) continue;
      for (const auto& inc : g_.incidences(u)) {
        if (dist.emplace(inc.other, du + 1).second) queue.push_back(inc.other);
      }
    }
    return dist;
  }

  bool is_match(std::size_t keyword, Graph::NodeId node) const {
    const auto& m = matched_[keyword];
    return std::find(m.begin(), m.end(), node) != m.end();
  }

  void collect_paths(std::size_t keyword, Graph::NodeId at, Path& current, std::set<Graph::NodeId>& on_path,
                     std::vector<Path>& out) const {
    if (is_match(keyword, at)) out.push_back(current);
    const std::size_t budget = max_edges_ - current.size();
    if (budget == 0) return;
    for (const auto& inc : g_.incidences(at)) {
      if (on_path.contains(inc.other)) continue;
      const auto it = distance_[keyword].find(inc.other);
      if (it == distance_[keyword].end() || it->second + 1 > budget) continue;
      current.push_back(inc.triple);
      on_path.insert(inc.other);
      collect_paths(keyword, inc.other, current, on_path, out);
      on_path.erase(inc.other);
      current.pop_back();
    }
  }

  void combine(Graph::NodeId root, const std::vector<std::vector<Path>>& paths, std::size_t keyword,
               std::vector<std::uint32_t>& edges) {
    if (keyword == paths.size()) {
      accept(root, edges);
      return;
    }
    for (const auto& path : paths[keyword]) {
      std::vector<std::uint32_t> merged;
      std::vector<std::uint32_t> sorted_path(path);
      std::sort(sorted_path.begin(), sorted_path.end());
      std::set_union(edges.begin(), edges.end(), sorted_path.begin(), sorted_path.end(),
                     std::back_inserter(merged));
      if (merged.size() > max_edges_) continue;
      combine(root, paths, keyword + 1, merged);
    }
  }

  void accept(Graph::NodeId root, const std::vector<std::uint32_t>& edges) {
    // Single-node answers are collected by the caller.
    if (edges.empty() || found_.contains(edges) || rejected_.contains(edges)) return;
    std::set<Graph::NodeId> nodes{root};
    for (const auto e : edges) {
      const auto& t = g_.triple(e);
      nodes.insert(g_.node_id(t.subject));
      nodes.insert(g_.node_id(t.object));
    }
    // Paths from a common root are connected; the union is a tree iff acyclic.
    if (nodes.size() != edges.size() + 1 || !is_minimal(g_, make_tree(edges, g_.node_label(root)), q_)) {
      rejected_.insert(edges);
      return;
    }
    found_.insert(edges);
  }

  AnswerTree make_tree(const std::vector<std::uint32_t>& edge_set, const std::string& fallback_root = {}) const {
    AnswerTree t;
    for (const auto e : edge_set) t.edges.push_back(g_.triple(e));
    std::sort(t.edges.begin(), t.edges.end());
    t.root = centre_of(t.edges, fallback_root);
    t.score = static_cast<double>(t.edges.size());
    return t;
  }

  const Graph& g_;
  const KeywordQuery& q_;
  std::size_t max_edges_;
  std::vector<std::vector<Graph::NodeId>> matched_;
  std::vector<std::map<Graph::NodeId, std::size_t>> distance_;
  std::set<std::vector<std::uint32_t>> found_;
  std::set<std::vector<std::uint32_t>> rejected_;
};

}  // namespace

KeywordQuery::KeywordQuery(std::vector<std::string> keywords) {
  if (keywords.size() < 2) throw ContractError("a keyword query needs at least two keywords");
  std::set<std::string> folded;
  for (auto& k : keywords) {
    k = trimmed(k);
    if (k.empty()) throw ContractError("empty keyword");
    if (!folded.insert(fold_case(k)).second) throw ContractError("duplicate keyword \"" + k + "\"");
  }
  keywords_ = std::move(keywords);
}

std::vector<std::string> AnswerTree::nodes() const {
  if (edges.empty()) return {root};
  const auto adjacency = tree_adjacency(edges);
  std::vector<std::string> order{root};
  std::set<std::string> seen{root};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto it = adjacency.find(order[i]);
    if (it == adjacency.end()) continue;
    for (const auto& [v, edge] : it->second) {
      if (seen.insert(v).second) order.push_back(v);
    }
  }
  return order;
}

std::string AnswerTree::serialization() const {
  if (edges.empty()) return "node:" + root;
  std::string out;
  for (const auto& e : edges) {
    if (!out.empty()) out += '\n';
    out += e.subject + '\t' + e.predicate + '\t' + e.object;
  }
  return out;
}

bool label_matches(std::string_view label, std::string_view keyword) {
  return fold_case(label).find(fold_case(keyword)) != std::string::npos;
}

std::vector<std::string> match_keyword(const Graph& g, std::string_view keyword) {
  if (keyword.empty()) throw ContractError("empty keyword");
  const auto needle = fold_case(keyword);
  std::vector<std::string> out;
  for (const auto& label : g.nodes()) {
    if (fold_case(label).find(needle) != std::string::npos) out.push_back(label);
  }
  return out;
}

std::optional<std::string> validate_answer_tree(const Graph& g, const AnswerTree& t, const KeywordQuery& q) {
  if (!g.has_node(t.root)) return "root \"" + t.root + "\" is not a graph node";
  for (const auto& e : t.edges) {
    if (!std::binary_search(g.triples().begin(), g.triples().end(), e)) {
      return "edge <" + e.subject + " " + e.predicate + " " + e.object + "> is not in the graph";
    }
  }
  const auto nodes = t.nodes();
  std::set<std::string> all_nodes;
  for (const auto& e : t.edges) {
    all_nodes.insert(e.subject);
    all_nodes.insert(e.object);
  }
  if (!t.edges.empty() && !all_nodes.contains(t.root)) return "root is not on any edge";
  if (!t.edges.empty() && all_nodes.size() != t.edges.size() + 1) return "edges do not form a tree";
  if (nodes.size() != t.node_count()) return "edges are not connected to the root";
  if (!covers_all(nodes, q)) return "tree does not cover every keyword";
  return std::nullopt;
}

bool is_minimal(const Graph&, const AnswerTree& t, const KeywordQuery& q) {
  const auto nodes = t.nodes();
  if (!covers_all(nodes, q)) return false;
  if (t.edges.empty()) return true;
  const auto adjacency = tree_adjacency(t.edges);
  for (const auto& [node, neighbours] : adjacency) {
    if (neighbours.size() != 1) continue;
    std::vector<std::string> rest;
    for (const auto& other : nodes) {
      if (other != node) rest.push_back(other);
    }
    if (covers_all(rest, q)) return false;
  }
  return true;
}

std::vector<AnswerTree> enumerate_answer_trees(const Graph& g, const KeywordQuery& q, const SearchOptions& options) {
  if (options.limit == 0) throw ContractError("search limit must be positive");

  // Nodes matching every keyword are complete single-node answers.
  std::vector<AnswerTree> trees;
  for (const auto& label : match_keyword(g, q.keywords().front())) {
    if (covers_all({label}, q)) {
      AnswerTree t;
      t.root = label;
      trees.push_back(std::move(t));
    }
  }

  TreeEnumerator enumerator(g, q, options.max_edges);
  for (auto& t : enumerator.run()) trees.push_back(std::move(t));

  std::vector<std::pair<std::string, AnswerTree>> keyed;
  keyed.reserve(trees.size());
  for (auto& t : trees) keyed.emplace_back(t.serialization(), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.edges.size() != b.second.edges.size()) return a.second.edges.size() < b.second.edges.size();
    return a.first < b.first;
  });

  std::vector<AnswerTree> out;
  for (auto& [key, t] : keyed) {
    if (out.size() == options.limit) break;
    t.rank = out.size() + 1;
    out.push_back(std::move(t));
  }
  return out;
}

nlohmann::json to_json(const AnswerTree& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : t.edges) edges.push_back({{"s", e.subject}, {"p", e.predicate}, {"o", e.object}});
  return {{"rank", t.rank}, {"score", t.score}, {"root", t.root}, {"edges", std::move(edges)}};
}

AnswerTree answer_tree_from_json(const nlohmann::json& j) {
  try {
    AnswerTree t;
    t.root = j.at("root").get<std::string>();
    t.rank = j.value("rank", std::size_t{0});
    for (const auto& e : j.at("edges")) {
      t.edges.push_back({e.at("s").get<std::string>(), e.at("p").get<std::string>(), e.at("o").get<std::string>()});
    }
    std::sort(t.edges.begin(), t.edges.end());
    t.score = j.value("score", static_cast<double>(t.edges.size()));
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed answer tree: ") + ex.what());
  }
}

nlohmann::json answer_trees_to_json(const KeywordQuery& q, const std::vector<AnswerTree>& trees) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : trees) list.push_back(to_json(t));
  return {{"query", q.keywords()}, {"trees", std::move(list)}};
}

AnswerTreeList answer_trees_from_json(const nlohmann::json& j) {
  try {
    KeywordQuery q(j.at("query").get<std::vector<std::string>>());
    std::vector<AnswerTree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(answer_tree_from_json(t));
    return {std::move(q), std::move(trees)};
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed answer-tree document: ") + ex.what());
  }
}

}  // namespace klustree
