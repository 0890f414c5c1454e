#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "recsim/error.hpp"
#include "recsim/metrics.hpp"

using namespace recsim;

TEST_CASE("gini hand values") {
  CHECK(gini(std::vector<int>{1, 2, 3, 4}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gini(std::vector<int>{5, 5, 5}) == doctest::Approx(0.0));
  // one item holds everything: (M - 1) / M
  CHECK(gini(std::vector<int>{0, 0, 0, 7}) == doctest::Approx(0.75));
}

TEST_CASE("gini matches the mean-absolute-difference form") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 500; ++rep) {
    const auto m = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    std::vector<unsigned> k(m);
    std::vector<double> kd(m);
    for (std::size_t i = 0; i < m; ++i) kd[i] = k[i] = std::uniform_int_distribution<unsigned>(0, 50)(rng);
    k[0] += 1;
    kd[0] += 1;
    CHECK(std::abs(gini(k) - oracle::gini_mad(kd)) < 1e-12);
  }
}

TEST_CASE("gini is invariant under permutation and scaling") {
  std::vector<double> a{3, 1, 4, 1, 5, 9, 2, 6};
  std::vector<double> b{9, 6, 5, 4, 3, 2, 1, 1};
  std::vector<double> c;
  for (double x : a) c.push_back(3.5 * x);
  CHECK(gini(a) == doctest::Approx(gini(b)).epsilon(1e-15));
  CHECK(gini(a) == doctest::Approx(gini(c)).epsilon(1e-14));
}

TEST_CASE("herfindahl and top share") {
  CHECK(herfindahl(std::vector<int>{1, 3}) == doctest::Approx(0.625));
  CHECK(herfindahl(std::vector<int>{2, 2, 2, 2}) == doctest::Approx(0.25));
  CHECK(top_share(std::vector<int>{4, 3, 2, 1}, 0.25) == doctest::Approx(0.4));
  // a fraction too small for one item still takes the largest
  CHECK(top_share(std::vector<int>{1, 8, 1}, 0.01) == doctest::Approx(0.8));
  CHECK(top_share(std::vector<int>{1, 8, 1}, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("popularity-rank curve") {
  const auto curve = popularity_rank_curve(std::vector<int>{1, 4, 2, 0});
  REQUIRE(curve.size() == 4);
  CHECK(curve[0].rank_norm == doctest::Approx(0.25));
  CHECK(curve[0].pop_norm == doctest::Approx(4.0 / 7.0));
  CHECK(curve[1].pop_norm == doctest::Approx(2.0 / 7.0));
  CHECK(curve[3].rank_norm == doctest::Approx(1.0));
  CHECK(curve[3].pop_norm == doctest::Approx(0.0));
}

TEST_CASE("uniform degrees give a flat curve at 1/M") {
  for (const auto& pt : popularity_rank_curve(std::vector<int>{3, 3, 3, 3, 3})) CHECK(pt.pop_norm == doctest::Approx(0.2));
}

TEST_CASE("snapshot bundles the three metrics") {
  const std::vector<int> k{1, 2, 3, 4};
  const auto s = inequality_snapshot(std::span<const int>(k), 7);
  CHECK(s.sweep == 7);
  CHECK(s.gini == doctest::Approx(0.25));
  CHECK(s.herfindahl == doctest::Approx(30.0 / 100.0));
  CHECK(s.top1_share == doctest::Approx(0.4));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(gini(std::vector<int>{}), ContractViolation);
  CHECK_THROWS_AS(gini(std::vector<int>{0, 0}), ContractViolation);
  CHECK_THROWS_AS(gini(std::vector<int>{3, -1}), ContractViolation);
  CHECK_THROWS_AS(herfindahl(std::vector<double>{}), ContractViolation);
}
