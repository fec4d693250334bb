#include "klustree/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "klustree/errors.hpp"

namespace klustree {

std::string_view to_string(PairOrigin origin) noexcept {
  switch (origin) {
    case PairOrigin::WithinMax: return "within_max";
    case PairOrigin::WithinMin: return "within_min";
    case PairOrigin::CrossRepresentative: return "cross_representative";
  }
  return "within_max";
}

std::vector<JudgmentPair> generate_judgment_pairs(const Clustering& c, const DistanceMatrix& m,
                                                  std::span<const std::size_t> tree_ranks, std::uint64_t seed) {
  if (c.assignment.size() != m.size() || tree_ranks.size() != m.size()) {
    throw ContractError("clustering, matrix, and ranks must cover the same trees");
  }
  const auto members = c.members();
  std::vector<JudgmentPair> pairs;

  for (std::size_t id = 0; id < c.k; ++id) {
    const auto& cluster = members[id];
    if (cluster.size() < 2) continue;
    // First pair wins ties in both directions.
    std::pair<std::size_t, std::size_t> far{cluster[0], cluster[1]};
    std::pair<std::size_t, std::size_t> near = far;
    for (std::size_t x = 0; x < cluster.size(); ++x) {
      for (std::size_t y = x + 1; y < cluster.size(); ++y) {
        const double d = m(cluster[x], cluster[y]);
        if (d > m(far.first, far.second)) far = {cluster[x], cluster[y]};
        if (d < m(near.first, near.second)) near = {cluster[x], cluster[y]};
      }
    }
    pairs.push_back({far.first, far.second, PairOrigin::WithinMax, id, id});
    if (near != far) pairs.push_back({near.first, near.second, PairOrigin::WithinMin, id, id});
  }

  std::vector<std::size_t> representative(c.k);
  for (std::size_t id = 0; id < c.k; ++id) {
    representative[id] = *std::min_element(members[id].begin(), members[id].end(), [&](std::size_t a, std::size_t b) {
      return tree_ranks[a] < tree_ranks[b];
    });
  }
  for (std::size_t x = 0; x < c.k; ++x) {
    for (std::size_t y = x + 1; y < c.k; ++y) {
      pairs.push_back({representative[x], representative[y], PairOrigin::CrossRepresentative, x, y});
    }
  }

  std::mt19937_64 rng(seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

double ndcg(std::span<const std::size_t> order, const RelevanceGrades& grades) {
  if (order.empty()) throw ContractError("NDCG of an empty ranking");
  std::vector<int> presented;
  for (const auto id : order) {
    const auto it = grades.find(id);
    if (it == grades.end()) throw ContractError("no relevance grade for cluster " + std::to_string(id));
    if (it->second < kMinGrade || it->second > kMaxGrade) {
      throw ContractError("relevance grade out of scale for cluster " + std::to_string(id));
    }
    presented.push_back(it->second);
  }
  auto dcg = [](const std::vector<int>& gains) {
    double total = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
      total += static_cast<double>(gains[i]) / std::log2(static_cast<double>(i) + 2.0);
    }
    return total;
  };
  auto ideal = presented;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  return dcg(presented) / dcg(ideal);
}

GradesFile grades_from_json(const nlohmann::json& j) {
  try {
    GradesFile out;
    out.query = j.value("query", std::string{});
    out.method = j.value("method", std::string{});
    for (const auto& [key, value] : j.at("grades").items()) {
      std::size_t consumed = 0;
      const auto id = std::stoul(key, &consumed);
      if (consumed != key.size()) throw ContractError("cluster id \"" + key + "\" is not an integer");
      const int grade = value.get<int>();
      if (grade < kMinGrade || grade > kMaxGrade) {
        throw ContractError("grade for cluster " + key + " must lie in [1, 5]");
      }
      out.grades[id] = grade;
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ContractError(std::string("malformed grades file: ") + ex.what());
  } catch (const std::logic_error& ex) {
    throw ContractError(std::string("malformed grades file: ") + ex.what());
  }
}

nlohmann::json to_json(const GradesFile& g) {
  nlohmann::json grades = nlohmann::json::object();
  for (const auto& [id, grade] : g.grades) grades[std::to_string(id)] = grade;
  return {{"query", g.query}, {"method", g.method}, {"grades", std::move(grades)}};
}

}  // namespace klustree
