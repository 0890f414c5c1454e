#pragma once

#include <cstddef>
#include <vector>

#include "recsim/network.hpp"
#include "recsim/random.hpp"

namespace recsim {

/// Similarity exponent in s(a, b) = C(a, b) / (k_a k_b)^theta, theta in [0, 1].
/// theta = 0, 1/2, 1 give common-neighbour, cosine and Leicht-Holme-Newman.
class SimilarityParams {
 public:
  explicit SimilarityParams(double theta);
  double theta() const { return theta_; }

 private:
  double theta_;
};

struct ScoredItem {
  ItemId item;
  double score;
  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

/// Ranked candidates for one user, best first. Scores are strictly positive
/// and non-increasing; no item is currently held by the user.
using RecommendationList = std::vector<ScoredItem>;

double item_similarity(const BipartiteNetwork& net, ItemId a, ItemId b, double theta);

/// Score of every item the user does not hold (zero scores included), in item
/// id order.
std::vector<ScoredItem> icf_scores(const BipartiteNetwork& net, UserId user, double theta);

RecommendationList top_list(const BipartiteNetwork& net, UserId user, double theta,
                            std::size_t list_length, Rng& rng);

/// Picks rank r (1-based) with probability proportional to 1/r.
ItemId rank_reciprocal_pick(const RecommendationList& list, Rng& rng);

/// Reusable scoring workspace for repeated top-L queries on one network size.
///
/// Uses the factorisation f_a = k_a^-theta * sum_b C(a, b) k_b^-theta over the
/// user's items b, with a per-degree power table, so a query costs
/// O(user degree * n_items).
class Recommender {
 public:
  Recommender(double theta, std::size_t list_length);

  double theta() const { return theta_; }
  std::size_t list_length() const { return list_length_; }

  /// Top-L list for `user` on the current state of `net`. Ties are broken by
  /// a uniformly random order drawn from `rng`. The reference stays valid
  /// until the next call.
  const RecommendationList& recommend(const BipartiteNetwork& net, UserId user, Rng& rng);

  /// Raw accumulated scores for every item (held items included), for tests.
  const std::vector<double>& score_all(const BipartiteNetwork& net, UserId user);

 private:
  void prepare(const BipartiteNetwork& net);

  double theta_;
  std::size_t list_length_;
  std::vector<double> inv_pow_;  // k^-theta for k = 0..n_users, with 0 -> 0
  std::vector<double> acc_;
  std::vector<ScoredItem> candidates_;
  RecommendationList list_;
};

}  // namespace recsim
