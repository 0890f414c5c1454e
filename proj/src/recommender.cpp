#include "recsim/recommender.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "recsim/error.hpp"

namespace recsim {

namespace {

bool by_score_desc(const ScoredItem& a, const ScoredItem& b) { return a.score > b.score; }

// (k_a k_b)^theta, evaluated exactly at the three classical endpoints.
double degree_norm(double product, double theta) {
  if (theta == 0.0) return 1.0;
  if (theta == 0.5) return std::sqrt(product);
  if (theta == 1.0) return product;
  return std::pow(product, theta);
}

}  // namespace

SimilarityParams::SimilarityParams(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ContractViolation("theta must lie in [0, 1], got " + std::to_string(theta));
}

double item_similarity(const BipartiteNetwork& net, ItemId a, ItemId b, double theta) {
  SimilarityParams params(theta);
  if (a >= net.n_items() || b >= net.n_items()) throw ContractViolation("item id out of range");
  if (a == b) throw ContractViolation("self-similarity is undefined");
  const std::uint32_t common = net.common_neighbors(a, b);
  if (common == 0) return 0.0;
  const double product = static_cast<double>(net.item_degree(a)) * net.item_degree(b);
  assert(product > 0.0);
  return common / degree_norm(product, params.theta());
}

std::vector<ScoredItem> icf_scores(const BipartiteNetwork& net, UserId user, double theta) {
  if (user >= net.n_users()) throw ContractViolation("user id out of range");
  const auto held = net.user_links(user);
  std::vector<ScoredItem> scores;
  for (ItemId a = 0; a < net.n_items(); ++a) {
    if (net.has_link(user, a)) continue;
    double f = 0.0;
    for (const auto& h : held) f += item_similarity(net, a, h.item, theta);
    scores.push_back({a, f});
  }
  return scores;
}

RecommendationList top_list(const BipartiteNetwork& net, UserId user, double theta,
                            std::size_t list_length, Rng& rng) {
  Recommender rec(theta, list_length);
  return rec.recommend(net, user, rng);
}

ItemId rank_reciprocal_pick(const RecommendationList& list, Rng& rng) {
  if (list.empty()) throw ContractViolation("cannot pick from an empty recommendation list");
  double harmonic = 0.0;
  for (std::size_t r = 1; r <= list.size(); ++r) harmonic += 1.0 / static_cast<double>(r);
  double u = std::uniform_real_distribution<double>(0.0, harmonic)(rng);
  for (std::size_t r = 1; r <= list.size(); ++r) {
    u -= 1.0 / static_cast<double>(r);
    if (u < 0.0) return list[r - 1].item;
  }
  return list.back().item;
}

Recommender::Recommender(double theta, std::size_t list_length)
    : theta_(SimilarityParams(theta).theta()), list_length_(list_length) {
  if (list_length == 0) throw ContractViolation("list length must be at least 1");
}

void Recommender::prepare(const BipartiteNetwork& net) {
  // Item degrees never exceed the user count.
  if (inv_pow_.size() != net.n_users() + 1) {
    inv_pow_.assign(net.n_users() + 1, 0.0);
    for (std::size_t k = 1; k < inv_pow_.size(); ++k)
      inv_pow_[k] = 1.0 / degree_norm(static_cast<double>(k), theta_);
  }
  acc_.assign(net.n_items(), 0.0);
}

const std::vector<double>& Recommender::score_all(const BipartiteNetwork& net, UserId user) {
  if (user >= net.n_users()) throw ContractViolation("user id out of range");
  prepare(net);
  const std::size_t m = net.n_items();
  double* acc = acc_.data();
  for (const auto& h : net.user_links(user)) {
    const double w = inv_pow_[net.item_degree(h.item)];
    const std::uint32_t* row = net.common_neighbor_row(h.item).data();
    for (std::size_t a = 0; a < m; ++a)
      acc[a] += w * static_cast<double>(static_cast<std::int32_t>(row[a]));
  }
  const auto degrees = net.item_degrees();
  for (std::size_t a = 0; a < m; ++a) acc[a] *= inv_pow_[degrees[a]];
  return acc_;
}

const RecommendationList& Recommender::recommend(const BipartiteNetwork& net, UserId user,
                                                 Rng& rng) {
  score_all(net, user);
  candidates_.clear();
  for (ItemId a = 0; a < net.n_items(); ++a)
    if (acc_[a] > 0.0 && !net.has_link(user, a)) candidates_.push_back({a, acc_[a]});

  list_.clear();
  if (candidates_.size() <= list_length_) {
    list_.assign(candidates_.begin(), candidates_.end());
  } else {
    const auto cut = candidates_.begin() + static_cast<std::ptrdiff_t>(list_length_ - 1);
    std::nth_element(candidates_.begin(), cut, candidates_.end(), by_score_desc);
    const double threshold = cut->score;
    std::vector<ScoredItem> tied;
    for (const auto& c : candidates_) {
      if (c.score > threshold) list_.push_back(c);
      else if (c.score == threshold) tied.push_back(c);
    }
    // Uniform subset of the items tied at the cut.
    const std::size_t need = list_length_ - list_.size();
    for (std::size_t i = 0; i < need; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, tied.size() - 1);
      std::swap(tied[i], tied[pick(rng)]);
      list_.push_back(tied[i]);
    }
  }
  std::shuffle(list_.begin(), list_.end(), rng);
  std::stable_sort(list_.begin(), list_.end(), by_score_desc);
  return list_;
}

}  // namespace recsim
