#include "recsim/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recsim/error.hpp"

namespace recsim {

void RewiringConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("p must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ContractViolation("theta must lie in [0, 1]");
  if (list_length < 1) throw ContractViolation("list length must be at least 1");
  if (window < 1) throw ContractViolation("stationarity window must be at least 1");
  if (!(eps > 0.0)) throw ContractViolation("stationarity eps must be positive");
}

std::string_view to_string(Termination t) {
  return t == Termination::stationary ? "stationary" : "max_sweeps_reached";
}

double SweepTrace::stationary_gini() const {
  if (records.size() <= 1) return records.empty() ? 0.0 : records.front().metrics.gini;
  const std::size_t n = std::min(std::max<std::size_t>(window, 1), records.size() - 1);
  double sum = 0.0;
  for (std::size_t i = records.size() - n; i < records.size(); ++i) sum += records[i].metrics.gini;
  return sum / static_cast<double>(n);
}

RewiringEngine::RewiringEngine(const RewiringConfig& config)
    : config_(config), recommender_(config.theta, config.list_length) {
  config_.validate();
}

RewireOutcome RewiringEngine::choose(const BipartiteNetwork& net, UserId user, Rng& rng) {
  const Link oldest = net.oldest_link(user);
  const bool follow = std::bernoulli_distribution(config_.p)(rng);
  if (follow) {
    const auto& list = recommender_.recommend(net, user, rng);
    if (!list.empty()) return {oldest.item, rank_reciprocal_pick(list, rng), ChoiceChannel::recommendation};
    return {oldest.item, attachment_pick_for(net, user, config_.attachment, rng), ChoiceChannel::fallback};
  }
  return {oldest.item, attachment_pick_for(net, user, config_.attachment, rng), ChoiceChannel::attachment};
}

RewireOutcome RewiringEngine::rewire_user(BipartiteNetwork& net, UserId user, Rng& rng) {
  const RewireOutcome out = choose(net, user, rng);
  net.rewire_link(user, out.old_item, out.new_item);
  return out;
}

std::uint64_t RewiringEngine::sweep(BipartiteNetwork& net, Rng& rng) {
  order_.resize(net.n_users());
  std::iota(order_.begin(), order_.end(), UserId{0});
  std::shuffle(order_.begin(), order_.end(), rng);
  std::uint64_t fallbacks = 0;
  for (UserId u : order_)
    if (rewire_user(net, u, rng).channel == ChoiceChannel::fallback) ++fallbacks;
  return fallbacks;
}

RewireOutcome rewire_user(BipartiteNetwork& net, UserId user, const RewiringConfig& config, Rng& rng) {
  RewiringEngine engine(config);
  return engine.rewire_user(net, user, rng);
}

std::uint64_t sweep(BipartiteNetwork& net, const RewiringConfig& config, Rng& rng) {
  RewiringEngine engine(config);
  return engine.sweep(net, rng);
}

SweepTrace run_to_stationarity(BipartiteNetwork& net, const RewiringConfig& config,
                               const MetricsHook& hook) {
  RewiringEngine engine(config);
  for (UserId u = 0; u < net.n_users(); ++u)
    if (net.user_degree(u) == 0)
      throw ContractViolation("user " + std::to_string(u) + " has no links to rewire");

  Rng rng(config.seed);
  SweepTrace trace;
  trace.window = config.window;
  trace.records.push_back({inequality_snapshot(net.item_degrees(), 0), 0});
  if (hook) hook(trace.records.back(), net);

  const std::size_t w = config.window;
  auto window_mean = [&](std::size_t end) {  // mean over records (end - w, end]
    double sum = 0.0;
    for (std::size_t i = end + 1 - w; i <= end; ++i) sum += trace.records[i].metrics.gini;
    return sum / static_cast<double>(w);
  };

  for (std::size_t s = 1; s <= config.max_sweeps; ++s) {
    const std::uint64_t fallbacks = engine.sweep(net, rng);
    trace.records.push_back({inequality_snapshot(net.item_degrees(), s), fallbacks});
    if (hook) hook(trace.records.back(), net);
    if (s >= 2 * w && std::abs(window_mean(s) - window_mean(s - w)) < config.eps) {
      trace.terminal = Termination::stationary;
      break;
    }
  }
  return trace;
}

}  // namespace recsim
