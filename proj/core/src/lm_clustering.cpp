#include "klustree/lm_clustering.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>

#include "klustree/errors.hpp"

namespace klustree {

namespace {

// JS over two supports sorted by the same key; identical keys are the same term.
template <typename It, typename Less>
double js_merge(It i, It i_end, It j, It j_end, Less less) {
  double kl_p = 0.0;
  double kl_q = 0.0;
  auto add = [&](double pt, double qt) {
    const double m = 0.5 * (pt + qt);
    if (pt > 0.0) kl_p += pt * std::log2(pt / m);
    if (qt > 0.0) kl_q += qt * std::log2(qt / m);
  };
  while (i != i_end || j != j_end) {
    if (j == j_end || (i != i_end && less(i->first, j->first))) {
      add(i->second, 0.0);
      ++i;
    } else if (i == i_end || less(j->first, i->first)) {
      add(0.0, j->second);
      ++j;
    } else {
      add(i->second, j->second);
      ++i;
      ++j;
    }
  }
  return std::clamp(0.5 * kl_p + 0.5 * kl_q, 0.0, 1.0);
}

void check_comparable(const LanguageModel& p, const LanguageModel& q) {
  if (p.side() != q.side()) throw ContractError("JS divergence between entity-side and relationship-side models");
  if (p.empty() || q.empty()) throw ContractError("JS divergence of an empty language model");
}

using Dense = std::vector<std::pair<std::uint32_t, double>>;

double js_dense(const Dense& p, const Dense& q) {
  return js_merge(p.begin(), p.end(), q.begin(), q.end(), std::less<std::uint32_t>{});
}

}  // namespace

double js_divergence(const LanguageModel& p, const LanguageModel& q) {
  check_comparable(p, q);
  return js_merge(p.begin(), p.end(), q.begin(), q.end(), std::less<Term>{});
}

double tree_distance(const TreeLM& a, const TreeLM& b, double gamma) {
  const double entity = js_divergence(a.entity_lm, b.entity_lm);
  if (a.relationship_lm.empty() || b.relationship_lm.empty()) return entity;
  if (gamma >= 1.0) return entity;
  return gamma * entity + (1.0 - gamma) * js_divergence(a.relationship_lm, b.relationship_lm);
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ContractError("distance matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const double v = rows[i][j];
      if (!std::isfinite(v) || v < 0.0) throw ContractError("distance matrix entries must be finite and non-negative");
      if (v != rows[j][i]) throw ContractError("distance matrix is not symmetric");
      if (i == j && v != 0.0) throw ContractError("distance matrix diagonal must be zero");
      m.d_[i * m.n_ + j] = v;
    }
  }
  return m;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  d_[i * n_ + j] = value;
  d_[j * n_ + i] = value;
}

bool DistanceMatrix::all_zero() const {
  return std::all_of(d_.begin(), d_.end(), [](double v) { return v == 0.0; });
}

DistanceMatrix build_distance_matrix(std::span<const TreeLM> trees, double gamma) {
  // Intern terms in Term order so the dense merge sums in the same order as js_divergence.
  std::map<Term, std::uint32_t> ids;
  for (const auto& t : trees) {
    for (const auto& [term, p] : t.entity_lm) ids.emplace(term, 0);
    for (const auto& [term, p] : t.relationship_lm) ids.emplace(term, 0);
  }
  std::uint32_t next = 0;
  for (auto& [term, id] : ids) id = next++;
  auto densify = [&](const LanguageModel& lm) {
    Dense out;
    out.reserve(lm.size());
    for (const auto& [term, p] : lm) out.emplace_back(ids.at(term), p);
    return out;
  };

  std::vector<Dense> entity, relationship;
  for (const auto& t : trees) {
    entity.push_back(densify(t.entity_lm));
    relationship.push_back(densify(t.relationship_lm));
  }

  DistanceMatrix m(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = i + 1; j < trees.size(); ++j) {
      check_comparable(trees[i].entity_lm, trees[j].entity_lm);
      const double e = js_dense(entity[i], entity[j]);
      const bool entity_only = relationship[i].empty() || relationship[j].empty() || gamma >= 1.0;
      m.set(i, j, entity_only ? e : gamma * e + (1.0 - gamma) * js_dense(relationship[i], relationship[j]));
    }
  }
  return m;
}

std::vector<std::size_t> Dendrogram::cut(std::size_t k) const {
  if (k == 0 || k > leaves) throw ContractError("cannot cut " + std::to_string(leaves) + " leaves into " +
                                                std::to_string(k) + " clusters");
  // cluster id -> representative leaf-side label
  std::vector<std::size_t> parent(leaves + merges.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::size_t steps = leaves - k;
  for (std::size_t s = 0; s < steps; ++s) {
    parent[merges[s].left] = leaves + s;
    parent[merges[s].right] = leaves + s;
  }
  std::vector<std::size_t> assignment(leaves);
  for (std::size_t leaf = 0; leaf < leaves; ++leaf) {
    std::size_t c = leaf;
    while (parent[c] != c) c = parent[c];
    assignment[leaf] = c;
  }
  return Clustering::from_assignment(std::move(assignment)).assignment;
}

Dendrogram complete_link_dendrogram(const DistanceMatrix& m) {
  const std::size_t n = m.size();
  if (n < 2) throw DegenerateInputError("complete-link clustering needs at least two trees");

  const std::size_t total = 2 * n - 1;
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * total + j] = m(i, j);
  }
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  Dendrogram tree;
  tree.leaves = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    // `active` stays ascending, so the first strict minimum is the tie-break winner.
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double d = dist[active[x] * total + active[y]];
        if (d < best) {
          best = d;
          best_a = x;
          best_b = y;
        }
      }
    }
    const std::size_t a = active[best_a];
    const std::size_t b = active[best_b];
    const std::size_t merged = n + step;
    for (const auto c : active) {
      const double d = std::max(dist[a * total + c], dist[b * total + c]);
      dist[merged * total + c] = d;
      dist[c * total + merged] = d;
    }
    tree.merges.push_back({a, b, best});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    active.push_back(merged);
  }
  return tree;
}

Clustering Clustering::from_assignment(std::vector<std::size_t> assignment) {
  if (assignment.empty()) throw ContractError("clustering of zero trees");
  std::map<std::size_t, std::size_t> relabel;
  for (auto& id : assignment) {
    const auto [it, inserted] = relabel.emplace(id, relabel.size());
    id = it->second;
  }
  Clustering c;
  c.k = relabel.size();
  c.assignment = std::move(assignment);
  return c;
}

std::vector<std::vector<std::size_t>> Clustering::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) out.at(assignment[i]).push_back(i);
  return out;
}

double ch_index(const DistanceMatrix& m, const Clustering& c) {
  const std::size_t n = m.size();
  if (c.assignment.size() != n) throw ContractError("clustering and matrix cover different trees");
  if (c.k < 2 || c.k + 1 > n) {
    throw ContractError("CH index is defined for 2 <= K <= N-1 (K=" + std::to_string(c.k) +
                        ", N=" + std::to_string(n) + ")");
  }
  double within = 0.0;
  double between = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      (c.assignment[i] == c.assignment[j] ? within : between) += m(i, j);
    }
  }
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  const double k = static_cast<double>(c.k);
  return (static_cast<double>(n) - k) * between / ((k - 1.0) * within);
}

Clustering select_clustering(const DistanceMatrix& m, std::size_t k_min, std::size_t k_max) {
  const std::size_t n = m.size();
  if (n < 2) throw DegenerateInputError("clustering needs at least two trees");
  if (m.all_zero()) return Clustering::from_assignment(std::vector<std::size_t>(n, 0));
  if (n == 2) return Clustering::from_assignment({0, 1});

  const std::size_t lo = std::max<std::size_t>(2, k_min);
  const std::size_t hi = std::min(k_max, n - 1);
  if (lo > hi) throw ContractError("empty K range [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "]");

  const auto dendrogram = complete_link_dendrogram(m);
  Clustering best;
  for (std::size_t k = lo; k <= hi; ++k) {
    auto candidate = Clustering::from_assignment(dendrogram.cut(k));
    candidate.ch_value = ch_index(m, candidate);
    if (best.assignment.empty() || candidate.ch_value > best.ch_value) best = std::move(candidate);
  }
  return best;
}

std::string_view to_string(RankingHeuristic h) noexcept {
  switch (h) {
    case RankingHeuristic::Best: return "best";
    case RankingHeuristic::Worst: return "worst";
    case RankingHeuristic::Average: return "avg";
    case RankingHeuristic::LargestSize: return "size";
  }
  return "best";
}

RankingHeuristic parse_heuristic(std::string_view name) {
  if (name == "best") return RankingHeuristic::Best;
  if (name == "worst") return RankingHeuristic::Worst;
  if (name == "avg" || name == "average") return RankingHeuristic::Average;
  if (name == "size" || name == "largest") return RankingHeuristic::LargestSize;
  throw ContractError("unknown ranking heuristic \"" + std::string(name) + "\"");
}

ClusterRanking rank_clusters(const Clustering& c, std::span<const std::size_t> tree_ranks,
                             std::span<const std::size_t> tree_sizes, RankingHeuristic h) {
  if (tree_ranks.size() != c.assignment.size() || tree_sizes.size() != c.assignment.size()) {
    throw ContractError("per-tree ranks and sizes must cover every clustered tree");
  }
  const auto members = c.members();
  ClusterRanking ranking;
  ranking.heuristic = h;
  ranking.representative.resize(c.k);
  std::vector<double> key(c.k);
  for (std::size_t id = 0; id < c.k; ++id) {
    const auto& m = members[id];
    if (m.empty()) throw ContractError("cluster " + std::to_string(id) + " is empty");
    ranking.representative[id] = *std::min_element(
        m.begin(), m.end(), [&](std::size_t a, std::size_t b) { return tree_ranks[a] < tree_ranks[b]; });
    double best = std::numeric_limits<double>::infinity();
    double worst = 0.0;
    double sum = 0.0;
    double largest = 0.0;
    for (const auto t : m) {
      const auto r = static_cast<double>(tree_ranks[t]);
      best = std::min(best, r);
      worst = std::max(worst, r);
      sum += r;
      largest = std::max(largest, static_cast<double>(tree_sizes[t]));
    }
    switch (h) {
      case RankingHeuristic::Best: key[id] = best; break;
      case RankingHeuristic::Worst: key[id] = worst; break;
      case RankingHeuristic::Average: key[id] = sum / static_cast<double>(m.size()); break;
      case RankingHeuristic::LargestSize: key[id] = largest; break;
    }
  }
  ranking.order.resize(c.k);
  std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return ranking;
}

}  // namespace klustree
