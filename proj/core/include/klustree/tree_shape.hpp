#pragma once

#include <map>
#include <string>
#include <vector>

#include "klustree/graph_store.hpp"

namespace klustree {

/// Undirected view of a tree's edges: node -> (neighbour, edge index).
using TreeAdjacency = std::map<std::string, std::vector<std::pair<std::string, std::size_t>>>;

TreeAdjacency tree_adjacency(const std::vector<Triple>& edges);

/// AHU encoding of the unlabeled tree hung from `root`: "(" + sorted child
/// encodings + ")". Equal encodings iff the rooted trees are isomorphic.
std::string shape_encoding(const TreeAdjacency& adjacency, const std::string& root);

}  // namespace klustree
