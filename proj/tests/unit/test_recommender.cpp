#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "recsim/error.hpp"
#include "recsim/recommender.hpp"

using namespace recsim;

namespace {

double oracle_score(const oracle::ItemSets& sets, const BipartiteNetwork& net, UserId u, ItemId a, double theta) {
  double f = 0.0;
  for (const auto& h : net.user_links(u)) {
    const double c = sets.common(a, h.item);
    if (c == 0.0) continue;
    f += c / std::pow(static_cast<double>(sets.users[a].size()) * static_cast<double>(sets.users[h.item].size()), theta);
  }
  return f;
}

}  // namespace

TEST_CASE("similarity endpoints equal the classical measures") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto net = oracle::random_network(rng, 10, 8, 0.35);
    const oracle::ItemSets sets(net);
    for (ItemId a = 0; a < 8; ++a)
      for (ItemId b = 0; b < 8; ++b) {
        if (a == b) continue;
        CHECK(item_similarity(net, a, b, 0.0) == sets.common(a, b));
        CHECK(item_similarity(net, a, b, 0.5) == sets.cosine(a, b));
        CHECK(item_similarity(net, a, b, 1.0) == sets.lhn(a, b));
      }
  }
}

TEST_CASE("similarity is symmetric and zero without common users") {
  const std::vector<Edge> edges{{0, 0}, {0, 1}, {1, 2}};
  const auto net = BipartiteNetwork::from_edge_list(edges, 1);
  CHECK(item_similarity(net, 0, 1, 0.3) == item_similarity(net, 1, 0, 0.3));
  CHECK(item_similarity(net, 0, 2, 0.0) == 0.0);
  CHECK_THROWS_AS(item_similarity(net, 1, 1, 0.5), ContractViolation);
  CHECK_THROWS_AS(SimilarityParams(1.5), ContractViolation);
  CHECK_THROWS_AS(SimilarityParams(-0.1), ContractViolation);
}

TEST_CASE("scores match a direct sum over held items") {
  std::mt19937_64 rng(6);
  for (double theta : {0.0, 0.25, 0.5, 0.6, 1.0}) {
    const auto net = oracle::random_network(rng, 15, 20, 0.25);
    const oracle::ItemSets sets(net);
    Recommender rec(theta, 5);
    for (UserId u = 0; u < net.n_users(); ++u) {
      const auto scores = icf_scores(net, u, theta);
      CHECK(scores.size() == net.n_items() - net.user_degree(u));
      const auto& fast = rec.score_all(net, u);
      for (const auto& s : scores) {
        const double want = oracle_score(sets, net, u, s.item, theta);
        CHECK(s.score == doctest::Approx(want).epsilon(1e-12));
        CHECK(fast[s.item] == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("the list holds the L best positive unheld items in score order") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const auto net = oracle::random_network(rng, 12, 30, 0.15);
    const double theta = 0.05 * static_cast<double>(rep % 21);
    for (UserId u = 0; u < net.n_users(); ++u) {
      auto scores = icf_scores(net, u, theta);
      std::erase_if(scores, [](const ScoredItem& s) { return s.score <= 0.0; });
      std::sort(scores.begin(), scores.end(), [](auto& a, auto& b) { return a.score > b.score; });
      Rng r(rep);
      const auto list = top_list(net, u, theta, 6, r);
      REQUIRE(list.size() == std::min<std::size_t>(6, scores.size()));
      for (std::size_t j = 0; j < list.size(); ++j) {
        CHECK_FALSE(net.has_link(u, list[j].item));
        CHECK(list[j].score == doctest::Approx(scores[j].score).epsilon(1e-12));
        if (j) CHECK(list[j - 1].score >= list[j].score);
      }
    }
  }
}

TEST_CASE("ties at the cut are broken uniformly") {
  // user 0 holds item 0; items 1..4 each share exactly one user with item 0
  const std::vector<Edge> edges{{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 2}, {3, 0}, {3, 3}, {4, 0}, {4, 4}};
  const auto net = BipartiteNetwork::from_edge_list(edges, 2);
  std::map<ItemId, int> seen;
  Rng rng(4);
  const int trials = 8000;
  for (int t = 0; t < trials; ++t) {
    const auto list = top_list(net, 0, 0.0, 2, rng);
    REQUIRE(list.size() == 2);
    for (const auto& s : list) ++seen[s.item];
  }
  // each of the four tied items is listed with probability 1/2
  for (ItemId i = 1; i <= 4; ++i) {
    const double share = seen[i] / static_cast<double>(trials);
    CHECK(std::abs(share - 0.5) < 3.0 * std::sqrt(0.25 / trials));
  }
}

TEST_CASE("rank-reciprocal pick probabilities") {
  const RecommendationList list{{10, 3.0}, {20, 2.0}, {30, 1.0}};
  std::map<ItemId, int> count;
  Rng rng(12);
  const int n = 60000;
  for (int t = 0; t < n; ++t) ++count[rank_reciprocal_pick(list, rng)];
  const double want[] = {6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0};
  const ItemId items[] = {10, 20, 30};
  for (int j = 0; j < 3; ++j) {
    const double q = want[j];
    CHECK(std::abs(count[items[j]] / double(n) - q) < 3.0 * std::sqrt(q * (1 - q) / n));
  }
  CHECK_THROWS_AS(rank_reciprocal_pick(RecommendationList{}, rng), ContractViolation);
}

TEST_CASE("a user holding every co-occurring item gets an empty list") {
  const std::vector<Edge> edges{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}};
  const auto net = BipartiteNetwork::from_edge_list(edges, 3);
  Rng rng(1);
  CHECK(top_list(net, 0, 0.5, 20, rng).empty());
}
