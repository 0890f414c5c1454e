#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recsim/network.hpp"
#include "recsim/random.hpp"

namespace recsim {

/// Random train/probe divisions of a network's links.
struct SplitSpec {
  double probe_fraction = 0.1;
  std::size_t n_divisions = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainProbe {
  BipartiteNetwork train;    // same id space as the source, original timestamps
  std::vector<Edge> probe;   // ordered by (user, item)
};

/// Division `division_index` holds out floor(probe_fraction * E) links chosen
/// uniformly at random. Depends only on (spec.seed, division_index).
TrainProbe split_train_probe(const BipartiteNetwork& net, const SplitSpec& spec,
                             std::size_t division_index);

struct DivisionResult {
  std::size_t division = 0;
  double precision = 0.0;
  double short_term_diversity = 0.0;
  std::size_t eligible_users = 0;  // >= 1 probe link and nonzero train degree
  std::size_t listed_items = 0;    // list entries over all users
};

/// Builds a top-L list on `train` for every user with train degree >= 1 (in
/// user id order, ties broken from `rng`) and scores it against `probe`.
DivisionResult evaluate_division(const BipartiteNetwork& train, std::span<const Edge> probe,
                                 double theta, std::size_t list_length, Rng& rng);

/// Mean of d_i(L) / L over eligible users.
double precision_at_L(const BipartiteNetwork& train, std::span<const Edge> probe, double theta,
                      std::size_t list_length, Rng& rng);

/// Mean train degree of all listed items, with multiplicity across users.
double short_term_diversity(const BipartiteNetwork& train, double theta, std::size_t list_length,
                            Rng& rng);

struct EvaluationReport {
  double theta = 0.0;
  std::size_t list_length = 0;
  double precision = 0.0;
  double short_term_diversity = 0.0;
  std::vector<DivisionResult> divisions;

  std::vector<double> precision_per_division() const;
};

/// Averages evaluate_division over spec.n_divisions splits.
EvaluationReport evaluate(const BipartiteNetwork& net, const SplitSpec& spec, double theta,
                          std::size_t list_length, std::size_t jobs = 1);

}  // namespace recsim
