#include <doctest.h>

#include <algorithm>
#include <set>

#include "planted.hpp"
#include "recsim/error.hpp"
#include "recsim/evaluation.hpp"
#include "recsim/io.hpp"

using namespace recsim;

namespace {

BipartiteNetwork medium(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.users = 120;
  spec.items = 90;
  spec.links = 1800;
  spec.seed = seed;
  return synthetic_network(spec);
}

}  // namespace

TEST_CASE("split partitions the links") {
  const auto net = medium(1);
  SplitSpec spec;
  spec.seed = 4;
  const auto tp = split_train_probe(net, spec, 0);
  CHECK(tp.probe.size() == 180);
  CHECK(tp.train.n_links() + tp.probe.size() == net.n_links());
  CHECK(tp.train.n_users() == net.n_users());
  CHECK(tp.train.n_items() == net.n_items());
  std::set<std::pair<UserId, ItemId>> all, seen;
  for (const auto& l : net.links()) all.insert({l.user, l.item});
  for (const auto& l : tp.train.links()) CHECK(seen.insert({l.user, l.item}).second);
  for (const auto& e : tp.probe) CHECK(seen.insert({e.user, e.item}).second);
  CHECK(seen == all);
  CHECK(std::is_sorted(tp.probe.begin(), tp.probe.end(),
                       [](auto& a, auto& b) { return std::pair(a.user, a.item) < std::pair(b.user, b.item); }));
  // divisions differ, the same division repeats
  CHECK(split_train_probe(net, spec, 1).probe != tp.probe);
  CHECK(split_train_probe(net, spec, 0).probe == tp.probe);
}

TEST_CASE("split spec validation") {
  SplitSpec s;
  s.probe_fraction = 0.0;
  CHECK_THROWS_AS(s.validate(), ContractViolation);
  s.probe_fraction = 1.0;
  CHECK_THROWS_AS(s.validate(), ContractViolation);
  s = {};
  s.n_divisions = 0;
  CHECK_THROWS_AS(s.validate(), ContractViolation);
}

TEST_CASE("planted family gives the exact precision") {
  for (std::size_t size : {3u, 4u, 6u})
    for (std::size_t hits = 0; hits <= size; ++hits)
      for (std::size_t L : {1u, 5u, 20u})
        for (double theta : {0.0, 0.6, 1.0}) {
          const auto planted = oracle::planted_precision(3, size, hits);
          Rng rng(1);
          const auto r = evaluate_division(planted.train, planted.probe, theta, L, rng);
          CHECK(r.precision == doctest::Approx(planted.precision(L)).epsilon(1e-15));
          CHECK(r.eligible_users == 3 * size);
          CHECK(r.listed_items == 3 * size);
        }
}

TEST_CASE("short-term diversity averages listed item degrees") {
  const auto planted = oracle::planted_precision(2, 4, 2);
  Rng rng(1);
  // every listed item is held by size - 1 users
  CHECK(short_term_diversity(planted.train, 0.5, 20, rng) == doctest::Approx(3.0));
}

TEST_CASE("precision lies in [0, 1] and is worker-count independent") {
  const auto net = medium(2);
  SplitSpec spec;
  spec.n_divisions = 4;
  spec.seed = 3;
  for (double theta : {0.0, 0.5, 1.0}) {
    const auto one = evaluate(net, spec, theta, 10, 1);
    const auto two = evaluate(net, spec, theta, 10, 2);
    CHECK(one.precision >= 0.0);
    CHECK(one.precision <= 1.0);
    CHECK(one.precision == two.precision);
    CHECK(one.short_term_diversity == two.short_term_diversity);
    REQUIRE(one.divisions.size() == 4);
    double mean = 0;
    for (double p : one.precision_per_division()) mean += p / 4;
    CHECK(one.precision == doctest::Approx(mean));
  }
}
