#include "klustree/baseline_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "klustree/errors.hpp"
#include "klustree/tree_shape.hpp"

namespace klustree {

CanonicalForm canonical_form(const AnswerTree& t) {
  return {shape_encoding(tree_adjacency(t.edges), t.root)};
}

Clustering isomorphism_clusters(std::span<const AnswerTree> trees) {
  if (trees.empty()) throw ContractError("isomorphism clustering of zero trees");
  std::map<CanonicalForm, std::size_t> ids;
  std::vector<std::size_t> assignment;
  for (const auto& t : trees) {
    const auto [it, inserted] = ids.emplace(canonical_form(t), ids.size());
    assignment.push_back(it->second);
  }
  return Clustering::from_assignment(std::move(assignment));
}

DistanceMatrix isomorphism_distance_matrix(std::span<const AnswerTree> trees) {
  std::vector<CanonicalForm> forms;
  for (const auto& t : trees) forms.push_back(canonical_form(t));
  DistanceMatrix m(trees.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) m.set(i, j, forms[i] == forms[j] ? 0.0 : 1.0);
  }
  return m;
}

std::size_t OrderedTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

std::string encode(const OrderedTree& t) {
  std::string out = t.label;
  out += '(';
  for (const auto& c : t.children) out += encode(c);
  out += ')';
  return out;
}

OrderedTree hang(const TreeAdjacency& adjacency, const std::vector<Triple>& edges, const std::string& node,
                 const std::string* parent, std::string label) {
  OrderedTree out{std::move(label), {}};
  if (const auto it = adjacency.find(node); it != adjacency.end()) {
    for (const auto& [child, edge] : it->second) {
      if (parent != nullptr && child == *parent) continue;
      out.children.push_back(hang(adjacency, edges, child, &node, edges[edge].predicate + "|" + child));
    }
  }
  return out;
}

// Postorder view with leftmost-leaf descendants.
struct Postorder {
  std::vector<const std::string*> labels;
  std::vector<std::size_t> leftmost;

  explicit Postorder(const OrderedTree& t) { visit(t); }

  std::size_t visit(const OrderedTree& t) {
    std::size_t first_leaf = labels.size();
    bool first = true;
    for (const auto& c : t.children) {
      const auto l = visit(c);
      if (first) {
        first_leaf = l;
        first = false;
      }
    }
    labels.push_back(&t.label);
    leftmost.push_back(first_leaf);
    return first_leaf;
  }

  std::vector<std::size_t> keyroots() const {
    std::vector<std::size_t> roots;
    std::set<std::size_t> seen;
    for (std::size_t i = labels.size(); i-- > 0;) {
      if (seen.insert(leftmost[i]).second) roots.push_back(i);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
};

}  // namespace

OrderedTree canonicalize(OrderedTree t) {
  for (auto& c : t.children) c = canonicalize(std::move(c));
  std::vector<std::pair<std::string, OrderedTree>> keyed;
  for (auto& c : t.children) keyed.emplace_back(encode(c), std::move(c));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.label != b.second.label) return a.second.label < b.second.label;
    return a.first < b.first;
  });
  t.children.clear();
  for (auto& [key, c] : keyed) t.children.push_back(std::move(c));
  return t;
}

OrderedTree to_ordered_tree(const AnswerTree& t) {
  return canonicalize(hang(tree_adjacency(t.edges), t.edges, t.root, nullptr, t.root));
}

std::size_t ordered_tree_edit_distance(const OrderedTree& a, const OrderedTree& b) {
  const Postorder pa(a);
  const Postorder pb(b);
  const std::size_t na = pa.labels.size();
  const std::size_t nb = pb.labels.size();
  std::vector<std::size_t> treedist(na * nb, 0);

  for (const auto i1 : pa.keyroots()) {
    for (const auto j1 : pb.keyroots()) {
      const std::size_t li = pa.leftmost[i1];
      const std::size_t lj = pb.leftmost[j1];
      const std::size_t rows = i1 - li + 2;
      const std::size_t cols = j1 - lj + 2;
      std::vector<std::size_t> forest(rows * cols, 0);
      auto fd = [&](std::size_t r, std::size_t c) -> std::size_t& { return forest[r * cols + c]; };
      for (std::size_t r = 1; r < rows; ++r) fd(r, 0) = fd(r - 1, 0) + 1;
      for (std::size_t c = 1; c < cols; ++c) fd(0, c) = fd(0, c - 1) + 1;
      for (std::size_t r = 1; r < rows; ++r) {
        for (std::size_t c = 1; c < cols; ++c) {
          const std::size_t i = li + r - 1;
          const std::size_t j = lj + c - 1;
          const std::size_t edit = std::min(fd(r - 1, c), fd(r, c - 1)) + 1;
          if (pa.leftmost[i] == li && pb.leftmost[j] == lj) {
            const std::size_t relabel = fd(r - 1, c - 1) + (*pa.labels[i] == *pb.labels[j] ? 0 : 1);
            fd(r, c) = std::min(edit, relabel);
            treedist[i * nb + j] = fd(r, c);
          } else {
            const std::size_t subtree = fd(pa.leftmost[i] - li, pb.leftmost[j] - lj) + treedist[i * nb + j];
            fd(r, c) = std::min(edit, subtree);
          }
        }
      }
    }
  }
  return treedist[(na - 1) * nb + (nb - 1)];
}

std::size_t tree_edit_distance(const AnswerTree& a, const AnswerTree& b) {
  return ordered_tree_edit_distance(to_ordered_tree(a), to_ordered_tree(b));
}

double edit_similarity(const AnswerTree& a, const AnswerTree& b) {
  const auto ted = static_cast<double>(tree_edit_distance(a, b));
  return 1.0 - ted / static_cast<double>(a.node_count() + b.node_count());
}

SimilarityMatrix edit_similarity_matrix(std::span<const AnswerTree> trees) {
  std::vector<OrderedTree> ordered;
  for (const auto& t : trees) ordered.push_back(to_ordered_tree(t));
  SimilarityMatrix m(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      const auto ted = static_cast<double>(ordered_tree_edit_distance(ordered[i], ordered[j]));
      m.set(i, j, 1.0 - ted / static_cast<double>(trees[i].node_count() + trees[j].node_count()));
    }
  }
  return m;
}

double column_similarity(const SimilarityMatrix& m, std::size_t i, std::size_t j) {
  const std::size_t n = m.size();
  if (i >= n || j >= n) throw ContractError("column index out of range");
  double error = 0.0;
  for (std::size_t k = 0; k < n; ++k) error += std::abs(m(i, k) - m(j, k));
  return 1.0 - error / static_cast<double>(n);
}

DistanceMatrix ted_distance_matrix(std::span<const AnswerTree> trees) {
  const auto similarity = edit_similarity_matrix(trees);
  DistanceMatrix d(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      d.set(i, j, std::max(0.0, 1.0 - column_similarity(similarity, i, j)));
    }
  }
  return d;
}

Clustering ted_clusters(std::span<const AnswerTree> trees, std::size_t k_min, std::size_t k_max) {
  return select_clustering(ted_distance_matrix(trees), k_min, k_max);
}

}  // namespace klustree
