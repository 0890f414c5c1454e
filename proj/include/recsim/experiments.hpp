#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "recsim/evaluation.hpp"
#include "recsim/network.hpp"
#include "recsim/rewiring.hpp"

// Orchestration of grid experiments. Every run owns a copy of the input
// network and an RNG stream derived from (base seed, replica, coordinates),
// so results do not depend on execution order or on the worker count.

namespace recsim {

struct ExperimentOptions {
  std::size_t replicas = 5;
  std::size_t jobs = 1;  // 0 = hardware concurrency
};

/// Seed of replica r. Replica 0 uses the base seed itself, so a one-replica
/// experiment reproduces a plain run_to_stationarity call.
std::uint64_t replica_seed(std::uint64_t base, std::size_t replica);

/// Stationary Gini over replicas.
struct GstarStats {
  std::vector<double> values;
  std::vector<std::size_t> sweeps;
  std::size_t stationary_runs = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for one replica

  std::size_t replicas() const { return values.size(); }
  bool all_stationary() const { return stationary_runs == values.size(); }
};

GstarStats summarize_runs(std::span<const SweepTrace> traces);

// ---------------------------------------------------------------------------

struct ThetaSweepRow {
  double theta;
  double p;
  GstarStats gstar;
};

/// One row per (theta, p), each replica starting from a fresh copy of `net`.
std::vector<ThetaSweepRow> theta_sweep(const BipartiteNetwork& net, std::span<const double> thetas,
                                       std::span<const double> ps, const RewiringConfig& base,
                                       const ExperimentOptions& options);

// ---------------------------------------------------------------------------

/// Two initial conditions (by default the theta = 1 and theta = 0 stationary
/// states) followed by runs at every grid theta from each of them.
struct HysteresisProtocol {
  RewiringConfig base;              // p, L, attachment, stationarity, seed
  double low_init_theta = 1.0;      // diversity-favouring initial branch
  double high_init_theta = 0.0;     // popularity-favouring initial branch
  std::vector<double> theta_grid;
};

struct HysteresisRow {
  double init_theta;
  double theta;
  GstarStats gstar;
};

struct HysteresisResult {
  GstarStats low_init;
  GstarStats high_init;
  std::vector<HysteresisRow> rows;  // grouped by init_theta (low first), then grid order

  /// Row for (init_theta, theta), if present.
  const HysteresisRow* find(double init_theta, double theta) const;
};

HysteresisResult hysteresis_run(const BipartiteNetwork& net, const HysteresisProtocol& protocol,
                                const ExperimentOptions& options);

// ---------------------------------------------------------------------------

enum class DensityMode { link_removal, user_removal, item_removal };
std::string_view to_string(DensityMode mode);
/// Accepts "link", "user", "item" (optionally with a "_removal" suffix).
DensityMode parse_density_mode(std::string_view text);

/// `retain` is the target fraction of the original size: links kept (link
/// mode), users kept (user mode) or items kept (item mode). 1 is the identity.
struct DensitySpec {
  DensityMode mode = DensityMode::link_removal;
  double retain = 1.0;
  std::uint64_t seed = 0;
};

struct ReducedNetwork {
  BipartiteNetwork network;
  std::vector<UserId> user_origin;  // new id -> id in the source network
  std::vector<ItemId> item_origin;
};

/// Link mode removes uniformly random links but never a user's last one.
/// User and item modes remove uniformly sampled users or items with all
/// their links; users left without links are dropped as well. Ids are
/// re-compacted and timestamps kept.
ReducedNetwork modify_density(const BipartiteNetwork& net, const DensitySpec& spec);

/// Links per possible user-item pair.
double link_density(const BipartiteNetwork& net);

struct DensitySweepRow {
  DensityMode mode;
  double retain;
  double theta;
  double original_gini;    // after modification, before rewiring (replica mean)
  double density;          // link_density after modification (replica mean)
  double mean_item_degree; // after modification (replica mean)
  GstarStats gstar;
};

/// Runs with p = 1 on modified copies; rows ordered by mode, retain, theta.
std::vector<DensitySweepRow> density_sweep(const BipartiteNetwork& net, std::span<const double> retains,
                                           std::span<const DensityMode> modes,
                                           std::span<const double> thetas, const RewiringConfig& base,
                                           const ExperimentOptions& options);

// ---------------------------------------------------------------------------

struct TradeoffRow {
  double theta;
  double precision;
  double short_term_diversity;
  GstarStats gstar;
};

/// Precision on the input network and stationary Gini of the rewired
/// network, per theta.
std::vector<TradeoffRow> tradeoff_curve(const BipartiteNetwork& net, std::span<const double> thetas,
                                        const SplitSpec& split, const RewiringConfig& base,
                                        const ExperimentOptions& options);

struct TradeoffCost {
  double optimal_theta;
  double optimal_precision;
  std::optional<double> constrained_precision;  // none if no theta reaches the target
  double relative_cost;  // 1 - constrained / optimal; 1 if unreachable
};

/// Best precision attainable while keeping G* <= target_gini, reading the
/// (G*, precision) polyline over the theta grid with linear interpolation at
/// the crossing.
TradeoffCost precision_cost(std::span<const TradeoffRow> curve, double target_gini);

}  // namespace recsim
