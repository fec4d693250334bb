#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "klustree/graph_store.hpp"
#include "klustree/keyword_search.hpp"

namespace klustree {

/// Which vocabulary a model ranges over. Models of different sides are never compared.
enum class LmSide { Entity, Relationship };

std::string_view to_string(LmSide side) noexcept;

/// Sparse distribution over typed terms. A non-empty model always sums to 1
/// within 1e-9 and stores no entry below the drop threshold. The only empty
/// model is the relationship side of an edgeless tree.
class LanguageModel {
 public:
  /// Entries below this are dropped after mixing, then the rest renormalized.
  static constexpr double kDropThreshold = 1e-12;

  explicit LanguageModel(LmSide side) : side_(side) {}

  /// Drops tiny or non-positive weights and normalizes. Throws ContractError if
  /// any weight is non-finite or negative, or all weights vanish.
  static LanguageModel from_weights(LmSide side, std::map<Term, double> weights);

  LmSide side() const noexcept { return side_; }
  bool empty() const noexcept { return probs_.empty(); }
  std::size_t size() const noexcept { return probs_.size(); }
  double prob(const Term& term) const;
  double total() const;
  double mass(TermKind kind) const;

  const std::map<Term, double>& probs() const noexcept { return probs_; }
  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

 private:
  LmSide side_;
  std::map<Term, double> probs_;
};

/// How entity LMs are weighted inside a tree LM.
struct DeltaPolicy {
  enum class Kind { Equal, Explicit };
  Kind kind = Kind::Equal;
  /// Per-node weights for Kind::Explicit. Nodes not listed weigh 0; the tree's
  /// weights must be non-negative and sum to 1.
  std::map<std::string, double> weights;
};

struct LMParams {
  double lambda = 0.5;     // document vs corpus smoothing
  double mu = 0.5;         // entity unigram share
  double mu_s = 1.0 / 3;   // relationship subject-unigram share
  double mu_o = 1.0 / 3;   // relationship object-unigram share
  double gamma = 0.5;      // entity vs relationship weight in tree distance
  DeltaPolicy delta;

  /// Throws ContractError when a weight is out of range.
  void validate() const;
};

struct TreeLM {
  LanguageModel entity_lm{LmSide::Entity};
  LanguageModel relationship_lm{LmSide::Relationship};
  std::size_t tree_rank = 0;
};

LanguageModel estimate_entity_lm(const Graph& g, std::string_view entity, const LMParams& p);
LanguageModel estimate_relationship_lm(const Graph& g, std::string_view predicate, const LMParams& p);

/// Memoizes entity and relationship LMs for one graph and parameter set.
/// Concurrent lookups are safe; insertion takes an exclusive lock.
class LmCache {
 public:
  LmCache(const Graph& g, LMParams params);

  const LanguageModel& entity(const std::string& label);
  const LanguageModel& relationship(const std::string& predicate);
  const LMParams& params() const noexcept { return params_; }

 private:
  const LanguageModel& lookup(std::unordered_map<std::string, std::unique_ptr<LanguageModel>>& table,
                              const std::string& key, LmSide side);

  const Graph& graph_;
  LMParams params_;
  std::shared_mutex mutex_;
  std::unordered_map<std::string, std::unique_ptr<LanguageModel>> entities_;
  std::unordered_map<std::string, std::unique_ptr<LanguageModel>> relationships_;
};

TreeLM estimate_tree_lm(const Graph& g, const AnswerTree& t, const LMParams& p);
TreeLM estimate_tree_lm(LmCache& cache, const AnswerTree& t);

/// `{ "kind": ..., "terms": [ {"t", "type", "p"} ] }`, by descending p then term.
nlohmann::json to_json(const LanguageModel& lm);

}  // namespace klustree
