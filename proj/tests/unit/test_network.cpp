#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "recsim/error.hpp"
#include "recsim/network.hpp"

using namespace recsim;

namespace {

void check_consistent(const BipartiteNetwork& net) {
  const auto c = oracle::cooccurrence(net);
  const auto k = oracle::item_degrees(net);
  for (ItemId a = 0; a < net.n_items(); ++a) {
    REQUIRE(net.item_degree(a) == k[a]);
    for (ItemId b = 0; b < net.n_items(); ++b)
      if (a != b) REQUIRE(net.common_neighbors(a, b) == c[a][b]);
  }
  for (UserId u = 0; u < net.n_users(); ++u) {
    const auto held = net.user_links(u);
    for (std::size_t j = 1; j < held.size(); ++j) REQUIRE(held[j - 1].timestamp < held[j].timestamp);
    for (ItemId i = 0; i < net.n_items(); ++i) {
      const bool in = std::any_of(held.begin(), held.end(), [&](const HeldItem& h) { return h.item == i; });
      REQUIRE(net.has_link(u, i) == in);
    }
  }
}

}  // namespace

TEST_CASE("edge list construction") {
  const std::vector<Edge> edges{{0, 0}, {0, 2}, {1, 1}, {2, 2}};
  const auto net = BipartiteNetwork::from_edge_list(edges, 5);
  CHECK(net.n_users() == 3);
  CHECK(net.n_items() == 3);
  CHECK(net.n_links() == 4);
  CHECK(net.clock() == 5);
  std::set<Tick> stamps;
  for (const auto& l : net.links()) stamps.insert(l.timestamp);
  CHECK(stamps == std::set<Tick>{1, 2, 3, 4});
  CHECK(net.item_degree(2) == 2);
  CHECK(net.common_neighbors(0, 2) == 1);
  CHECK(net.common_neighbors(1, 2) == 0);
  check_consistent(net);
}

TEST_CASE("timestamps depend only on the seed") {
  const std::vector<Edge> edges{{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 0}};
  CHECK(BipartiteNetwork::from_edge_list(edges, 9) == BipartiteNetwork::from_edge_list(edges, 9));
  CHECK(BipartiteNetwork::from_edge_list(edges, 9).links() == BipartiteNetwork::from_edge_list(edges, 9).links());
}

TEST_CASE("rejects malformed construction input") {
  CHECK_THROWS_AS(BipartiteNetwork::from_edge_list(std::vector<Edge>{}, 1), InvalidInput);
  const std::vector<Edge> dup{{0, 0}, {0, 0}};
  CHECK_THROWS_AS(BipartiteNetwork::from_edge_list(dup, 1), InvalidInput);
  const std::vector<Link> same_time{{0, 0, 1}, {1, 0, 1}};
  CHECK_THROWS_AS(BipartiteNetwork::from_links(2, 1, same_time, 5), InvalidInput);
  const std::vector<Link> late{{0, 0, 5}};
  CHECK_THROWS_AS(BipartiteNetwork::from_links(1, 1, late, 5), InvalidInput);
  const std::vector<Link> out_of_range{{0, 3, 1}};
  CHECK_THROWS_AS(BipartiteNetwork::from_links(1, 2, out_of_range, 5), InvalidInput);
}

TEST_CASE("oldest link and rewiring") {
  const std::vector<Link> links{{0, 0, 3}, {0, 1, 1}, {1, 1, 2}, {1, 2, 4}};
  auto net = BipartiteNetwork::from_links(2, 4, links, 5);
  CHECK(net.oldest_link(0) == Link{0, 1, 1});
  net.rewire_link(0, 1, 3);
  CHECK(net.oldest_link(0) == Link{0, 0, 3});
  CHECK(net.user_links(0).back() == HeldItem{3, 5});
  CHECK(net.clock() == 6);
  CHECK(net.item_degree(1) == 1);
  CHECK(net.item_degree(3) == 1);
  CHECK(net.common_neighbors(0, 3) == 1);
  CHECK(net.common_neighbors(0, 1) == 0);
  check_consistent(net);

  CHECK_THROWS_AS(net.rewire_link(0, 2, 1), ContractViolation);  // not held
  CHECK_THROWS_AS(net.rewire_link(0, 0, 3), ContractViolation);  // already held
  CHECK_THROWS_AS(net.rewire_link(5, 0, 1), ContractViolation);
}

TEST_CASE("oldest link of an isolated user is a contract violation") {
  const std::vector<Edge> edges{{1, 0}};
  const auto net = BipartiteNetwork::from_edge_list(edges, 2, 1, 0);
  CHECK_THROWS_AS(net.oldest_link(0), ContractViolation);
}

TEST_CASE("incremental co-occurrence matches a recount after random rewiring") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    auto net = oracle::random_network(rng, 12, 15, 0.3);
    const auto users_before = net.user_degrees();
    for (int step = 0; step < 200; ++step) {
      const auto u = std::uniform_int_distribution<UserId>(0, 11)(rng);
      if (net.user_degree(u) == net.n_items()) continue;
      ItemId fresh;
      do fresh = std::uniform_int_distribution<ItemId>(0, 14)(rng);
      while (net.has_link(u, fresh));
      net.rewire_link(u, net.oldest_link(u).item, fresh);
    }
    check_consistent(net);
    CHECK(net.user_degrees() == users_before);
  }
}

TEST_CASE("equality covers links and clock") {
  const std::vector<Link> links{{0, 0, 1}, {0, 1, 2}};
  const auto a = BipartiteNetwork::from_links(1, 3, links, 3);
  auto b = a;
  CHECK(a == b);
  b.rewire_link(0, 0, 2);
  CHECK_FALSE(a == b);
}
