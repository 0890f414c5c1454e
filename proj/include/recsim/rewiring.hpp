#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "recsim/attachment.hpp"
#include "recsim/metrics.hpp"
#include "recsim/network.hpp"
#include "recsim/random.hpp"
#include "recsim/recommender.hpp"

namespace recsim {

/// Knobs of one co-evolution run.
struct RewiringConfig {
  double p = 1.0;                 // probability of following the recommendation
  double theta = 0.0;             // similarity exponent
  std::size_t list_length = 20;   // L
  AttachmentMode attachment = AttachmentMode::preferential;
  std::size_t max_sweeps = 2000;
  std::size_t window = 50;        // stationarity window W, in sweeps
  double eps = 0.002;             // stationarity tolerance, in Gini units
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Termination { stationary, max_sweeps_reached };
std::string_view to_string(Termination t);

struct SweepRecord {
  InequalitySnapshot metrics;
  std::uint64_t fallbacks = 0;  // recommendation branch taken with an empty list
};

struct SweepTrace {
  std::vector<SweepRecord> records;  // records[s].metrics.sweep == s; s = 0 is the input state
  Termination terminal = Termination::max_sweeps_reached;
  std::size_t window = 0;

  /// Mean Gini over the last `window` sweeps (or every recorded sweep after
  /// the initial state, if fewer).
  double stationary_gini() const;
  double initial_gini() const { return records.front().metrics.gini; }
  std::size_t sweeps() const { return records.size() - 1; }
};

enum class ChoiceChannel { recommendation, attachment, fallback };

struct RewireOutcome {
  ItemId old_item;
  ItemId new_item;
  ChoiceChannel channel;
};

/// Stateful driver holding the scoring workspace for one configuration.
/// Single-threaded; use one engine per network copy.
class RewiringEngine {
 public:
  explicit RewiringEngine(const RewiringConfig& config);

  const RewiringConfig& config() const { return config_; }

  /// Redirects the user's oldest link to an item chosen by the recommendation
  /// channel (probability p) or the attachment channel.
  RewireOutcome rewire_user(BipartiteNetwork& net, UserId user, Rng& rng);

  /// Rewires every user once in a fresh random order with immediate updates.
  /// Returns the number of recommendation-branch fallbacks.
  std::uint64_t sweep(BipartiteNetwork& net, Rng& rng);

  /// The item the user would be redirected to, without mutating the network.
  RewireOutcome choose(const BipartiteNetwork& net, UserId user, Rng& rng);

 private:
  RewiringConfig config_;
  Recommender recommender_;
  std::vector<UserId> order_;
};

RewireOutcome rewire_user(BipartiteNetwork& net, UserId user, const RewiringConfig& config, Rng& rng);
std::uint64_t sweep(BipartiteNetwork& net, const RewiringConfig& config, Rng& rng);

using MetricsHook = std::function<void(const SweepRecord&, const BipartiteNetwork&)>;

/// Sweeps until |mean(G over the last W sweeps) - mean(G over the W before)| < eps
/// or max_sweeps is reached. The RNG stream is seeded from config.seed.
SweepTrace run_to_stationarity(BipartiteNetwork& net, const RewiringConfig& config,
                               const MetricsHook& hook = {});

}  // namespace recsim
