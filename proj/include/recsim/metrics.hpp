#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "recsim/error.hpp"

// Inequality measures over item popularity. Items with zero degree count as
// members of the item universe in every measure.

namespace recsim {

template <class T>
concept Popularity = std::integral<T> || std::floating_point<T>;

struct InequalitySnapshot {
  std::size_t sweep = 0;
  double gini = 0.0;
  double herfindahl = 0.0;
  double top1_share = 0.0;
};

struct CurvePoint {
  double rank_norm;
  double pop_norm;
};

namespace detail {

template <Popularity T>
double checked_total(std::span<const T> degrees, const char* what) {
  if (degrees.empty()) throw ContractViolation(std::string(what) + ": empty degree vector");
  double total = 0.0;
  for (T k : degrees) {
    if constexpr (std::is_signed_v<T>)
      if (k < 0) throw ContractViolation(std::string(what) + ": negative degree");
    total += static_cast<double>(k);
  }
  if (!(total > 0.0)) throw ContractViolation(std::string(what) + ": all-zero degree vector");
  return total;
}

}  // namespace detail

/// G = 2 * sum_a a*k_a / (M * sum k) - (M + 1) / M with k sorted ascending and
/// 1-based ranks a. Maximal concentration gives (M - 1) / M.
template <Popularity T>
double gini(std::span<const T> degrees) {
  const double total = detail::checked_total(degrees, "gini");
  std::vector<T> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double weighted = 0.0;
  for (std::size_t a = 0; a < sorted.size(); ++a)
    weighted += static_cast<double>(a + 1) * static_cast<double>(sorted[a]);
  return 2.0 * weighted / (m * total) - (m + 1.0) / m;
}

/// Sum of squared popularity shares.
template <Popularity T>
double herfindahl(std::span<const T> degrees) {
  const double total = detail::checked_total(degrees, "herfindahl");
  double h = 0.0;
  for (T k : degrees) {
    const double share = static_cast<double>(k) / total;
    h += share * share;
  }
  return h;
}

/// Share of all links held by the ceil(fraction * M) most popular items.
template <Popularity T>
double top_share(std::span<const T> degrees, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ContractViolation("top_share: fraction must lie in (0, 1]");
  const double total = detail::checked_total(degrees, "top_share");
  // Guard against fraction * M landing a hair above an integer.
  const double raw = fraction * static_cast<double>(degrees.size());
  auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  count = std::clamp<std::size_t>(count, 1, degrees.size());
  std::vector<T> sorted(degrees.begin(), degrees.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count), sorted.end(),
                    std::greater<T>());
  double top = 0.0;
  for (std::size_t i = 0; i < count; ++i) top += static_cast<double>(sorted[i]);
  return top / total;
}

/// Degrees sorted descending; point r (1-based) is (r / M, k_(r) / sum k).
template <Popularity T>
std::vector<CurvePoint> popularity_rank_curve(std::span<const T> degrees) {
  const double total = detail::checked_total(degrees, "popularity_rank_curve");
  std::vector<T> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<T>());
  const double m = static_cast<double>(sorted.size());
  std::vector<CurvePoint> curve;
  curve.reserve(sorted.size());
  for (std::size_t r = 0; r < sorted.size(); ++r)
    curve.push_back({static_cast<double>(r + 1) / m, static_cast<double>(sorted[r]) / total});
  return curve;
}

template <Popularity T>
InequalitySnapshot inequality_snapshot(std::span<const T> degrees, std::size_t sweep) {
  return {sweep, gini(degrees), herfindahl(degrees), top_share(degrees, 0.01)};
}

// Convenience overloads so callers can pass vectors directly.
template <Popularity T>
double gini(const std::vector<T>& d) { return gini(std::span<const T>(d)); }
template <Popularity T>
double herfindahl(const std::vector<T>& d) { return herfindahl(std::span<const T>(d)); }
template <Popularity T>
double top_share(const std::vector<T>& d, double fraction) { return top_share(std::span<const T>(d), fraction); }
template <Popularity T>
std::vector<CurvePoint> popularity_rank_curve(const std::vector<T>& d) {
  return popularity_rank_curve(std::span<const T>(d));
}

}  // namespace recsim
