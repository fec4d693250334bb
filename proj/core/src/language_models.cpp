#include "klustree/language_models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <vector>

#include "klustree/errors.hpp"

namespace klustree {

namespace {

// Jelinek-Mercer interpolation of one term multiset against corpus counts
// normalized over the same term set.
std::map<Term, double> smoothed_component(const Graph& g, const TermCounts& counts, double lambda) {
  std::size_t doc_total = 0;
  std::size_t corpus_total = 0;
  std::map<Term, std::size_t> corpus;
  for (const auto& [term, c] : counts) {
    doc_total += c;
    const auto bg = g.corpus_count(term);
    corpus.emplace(term, bg);
    corpus_total += bg;
  }
  std::map<Term, double> probs;
  for (const auto& [term, c] : counts) {
    const double ml = static_cast<double>(c) / static_cast<double>(doc_total);
    const double background = static_cast<double>(corpus.at(term)) / static_cast<double>(corpus_total);
    probs.emplace(term, lambda * ml + (1.0 - lambda) * background);
  }
  return probs;
}

void accumulate(std::map<Term, double>& into, const std::map<Term, double>& component, double weight) {
  if (weight <= 0.0) return;
  for (const auto& [term, p] : component) into[term] += weight * p;
}

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::string_view to_string(LmSide side) noexcept {
  return side == LmSide::Entity ? "entity" : "relationship";
}

LanguageModel LanguageModel::from_weights(LmSide side, std::map<Term, double> weights) {
  double total = 0.0;
  bool dropped = false;
  for (auto it = weights.begin(); it != weights.end();) {
    if (!std::isfinite(it->second) || it->second < 0.0) {
      throw ContractError("language model weight for " + it->first.text() + " is not a finite non-negative value");
    }
    if (it->second < kDropThreshold) {
      dropped = true;
      it = weights.erase(it);
    } else {
      total += it->second;
      ++it;
    }
  }
  if (weights.empty()) throw ContractError("language model has no mass");
  if (dropped || std::abs(total - 1.0) > kDropThreshold) {
    for (auto& [term, w] : weights) w /= total;
  }
  LanguageModel lm(side);
  lm.probs_ = std::move(weights);
  return lm;
}

double LanguageModel::prob(const Term& term) const {
  const auto it = probs_.find(term);
  return it == probs_.end() ? 0.0 : it->second;
}

double LanguageModel::total() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0,
                         [](double acc, const auto& entry) { return acc + entry.second; });
}

double LanguageModel::mass(TermKind kind) const {
  double m = 0.0;
  for (const auto& [term, p] : probs_) {
    if (term.kind() == kind) m += p;
  }
  return m;
}

void LMParams::validate() const {
  if (!in_unit_interval(lambda)) throw ContractError("lambda must lie in [0, 1]");
  if (!in_unit_interval(mu)) throw ContractError("mu must lie in [0, 1]");
  if (!in_unit_interval(gamma)) throw ContractError("gamma must lie in [0, 1]");
  if (!in_unit_interval(mu_s) || !in_unit_interval(mu_o) || mu_s + mu_o > 1.0 + 1e-12) {
    throw ContractError("mu_s and mu_o must be non-negative with mu_s + mu_o <= 1");
  }
  for (const auto& [node, w] : delta.weights) {
    if (!std::isfinite(w) || w < 0.0) throw ContractError("delta weight for \"" + node + "\" is negative");
  }
}

LanguageModel estimate_entity_lm(const Graph& g, std::string_view entity, const LMParams& p) {
  p.validate();
  const auto terms = g.entity_terms(entity);
  std::map<Term, double> mixed;
  accumulate(mixed, smoothed_component(g, terms.unigrams, p.lambda), p.mu);
  accumulate(mixed, smoothed_component(g, terms.bigrams, p.lambda), 1.0 - p.mu);
  return LanguageModel::from_weights(LmSide::Entity, std::move(mixed));
}

LanguageModel estimate_relationship_lm(const Graph& g, std::string_view predicate, const LMParams& p) {
  p.validate();
  const auto terms = g.relationship_terms(predicate);
  std::map<Term, double> mixed;
  accumulate(mixed, smoothed_component(g, terms.subjects, p.lambda), p.mu_s);
  accumulate(mixed, smoothed_component(g, terms.objects, p.lambda), p.mu_o);
  accumulate(mixed, smoothed_component(g, terms.bigrams, p.lambda), std::max(0.0, 1.0 - p.mu_s - p.mu_o));
  return LanguageModel::from_weights(LmSide::Relationship, std::move(mixed));
}

LmCache::LmCache(const Graph& g, LMParams params) : graph_(g), params_(std::move(params)) {
  params_.validate();
}

const LanguageModel& LmCache::lookup(std::unordered_map<std::string, std::unique_ptr<LanguageModel>>& table,
                                     const std::string& key, LmSide side) {
  {
    std::shared_lock lock(mutex_);
    if (const auto it = table.find(key); it != table.end()) return *it->second;
  }
  auto lm = std::make_unique<LanguageModel>(side == LmSide::Entity ? estimate_entity_lm(graph_, key, params_)
                                                                   : estimate_relationship_lm(graph_, key, params_));
  std::unique_lock lock(mutex_);
  const auto [it, inserted] = table.emplace(key, std::move(lm));
  return *it->second;
}

const LanguageModel& LmCache::entity(const std::string& label) {
  return lookup(entities_, label, LmSide::Entity);
}

const LanguageModel& LmCache::relationship(const std::string& predicate) {
  return lookup(relationships_, predicate, LmSide::Relationship);
}

TreeLM estimate_tree_lm(LmCache& cache, const AnswerTree& t) {
  const auto& p = cache.params();
  const auto nodes = t.nodes();

  std::vector<double> delta(nodes.size(), 1.0 / static_cast<double>(nodes.size()));
  if (p.delta.kind == DeltaPolicy::Kind::Explicit) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto it = p.delta.weights.find(nodes[i]);
      delta[i] = it == p.delta.weights.end() ? 0.0 : it->second;
      sum += delta[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ContractError("explicit delta weights must sum to 1 over the tree's nodes");
  }

  TreeLM out;
  out.tree_rank = t.rank;
  std::map<Term, double> entity_mix;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (delta[i] > 0.0) accumulate(entity_mix, cache.entity(nodes[i]).probs(), delta[i]);
  }
  out.entity_lm = LanguageModel::from_weights(LmSide::Entity, std::move(entity_mix));

  if (!t.edges.empty()) {
    // One summand per edge, so repeated predicates count by multiplicity.
    std::map<Term, double> relationship_mix;
    const double w = 1.0 / static_cast<double>(t.edges.size());
    for (const auto& e : t.edges) accumulate(relationship_mix, cache.relationship(e.predicate).probs(), w);
    out.relationship_lm = LanguageModel::from_weights(LmSide::Relationship, std::move(relationship_mix));
  }
  return out;
}

TreeLM estimate_tree_lm(const Graph& g, const AnswerTree& t, const LMParams& p) {
  LmCache cache(g, p);
  return estimate_tree_lm(cache, t);
}

nlohmann::json to_json(const LanguageModel& lm) {
  std::vector<std::pair<const Term*, double>> entries;
  for (const auto& [term, p] : lm) entries.emplace_back(&term, p);
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    const auto ta = a.first->text();
    const auto tb = b.first->text();
    return ta != tb ? ta < tb : *a.first < *b.first;
  });
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [term, p] : entries) {
    terms.push_back({{"t", term->text()},
                     {"type", term->kind() == TermKind::Unigram ? "unigram" : "bigram"},
                     {"role", to_string(term->role)},
                     {"p", p}});
  }
  return {{"kind", to_string(lm.side())}, {"terms", std::move(terms)}};
}

}  // namespace klustree
