#include "klustree/tree_shape.hpp"

#include <algorithm>

namespace klustree {

TreeAdjacency tree_adjacency(const std::vector<Triple>& edges) {
  TreeAdjacency adjacency;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adjacency[edges[i].subject].emplace_back(edges[i].object, i);
    adjacency[edges[i].object].emplace_back(edges[i].subject, i);
  }
  for (auto& [node, neighbours] : adjacency) std::sort(neighbours.begin(), neighbours.end());
  return adjacency;
}

namespace {

std::string encode(const TreeAdjacency& adjacency, const std::string& node, const std::string* parent) {
  std::vector<std::string> children;
  if (const auto it = adjacency.find(node); it != adjacency.end()) {
    for (const auto& [neighbour, edge] : it->second) {
      if (parent != nullptr && neighbour == *parent) continue;
      children.push_back(encode(adjacency, neighbour, &node));
    }
  }
  std::sort(children.begin(), children.end());
  std::string out = "(";
  for (const auto& c : children) out += c;
  out += ')';
  return out;
}

}  // namespace

std::string shape_encoding(const TreeAdjacency& adjacency, const std::string& root) {
  return encode(adjacency, root, nullptr);
}

}  // namespace klustree
