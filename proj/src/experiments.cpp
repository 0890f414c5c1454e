#include "recsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recsim/error.hpp"
#include "recsim/metrics.hpp"
#include "recsim/parallel.hpp"

namespace recsim {

namespace {

struct RunSummary {
  double gstar = 0.0;
  std::size_t sweeps = 0;
  bool stationary = false;
};

RunSummary summarize(const SweepTrace& trace) {
  return {trace.stationary_gini(), trace.sweeps(), trace.terminal == Termination::stationary};
}

GstarStats collect(std::span<const RunSummary> runs) {
  GstarStats s;
  for (const auto& r : runs) {
    s.values.push_back(r.gstar);
    s.sweeps.push_back(r.sweeps);
    if (r.stationary) ++s.stationary_runs;
  }
  const double n = static_cast<double>(s.values.size());
  if (s.values.empty()) return s;
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  if (s.values.size() > 1) {
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

RewiringConfig with(const RewiringConfig& base, double theta, double p, std::uint64_t seed) {
  RewiringConfig c = base;
  c.theta = theta;
  c.p = p;
  c.seed = seed;
  c.validate();
  return c;
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ContractViolation(std::string(what) + " must not be empty");
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t base, std::size_t replica) {
  return replica == 0 ? base : derive_seed(base, {replica, 0xe9u});
}

GstarStats summarize_runs(std::span<const SweepTrace> traces) {
  std::vector<RunSummary> runs;
  for (const auto& t : traces) runs.push_back(summarize(t));
  return collect(runs);
}

// ---------------------------------------------------------------------------

std::vector<ThetaSweepRow> theta_sweep(const BipartiteNetwork& net, std::span<const double> thetas,
                                       std::span<const double> ps, const RewiringConfig& base,
                                       const ExperimentOptions& options) {
  require_nonempty(thetas.size(), "theta grid");
  require_nonempty(ps.size(), "p grid");
  require_nonempty(options.replicas, "replica count");
  const std::size_t r_count = options.replicas;
  const std::size_t n_tasks = thetas.size() * ps.size() * r_count;
  std::vector<RunSummary> runs(n_tasks);

  parallel_for(n_tasks, options.jobs, [&](std::size_t task) {
    const std::size_t r = task % r_count;
    const std::size_t pi = (task / r_count) % ps.size();
    const std::size_t ti = task / (r_count * ps.size());
    BipartiteNetwork copy = net;
    runs[task] = summarize(run_to_stationarity(copy, with(base, thetas[ti], ps[pi], replica_seed(base.seed, r))));
  });

  std::vector<ThetaSweepRow> rows;
  for (std::size_t ti = 0; ti < thetas.size(); ++ti)
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      const std::size_t first = (ti * ps.size() + pi) * r_count;
      rows.push_back({thetas[ti], ps[pi], collect(std::span(runs).subspan(first, r_count))});
    }
  return rows;
}

// ---------------------------------------------------------------------------

const HysteresisRow* HysteresisResult::find(double init_theta, double theta) const {
  for (const auto& row : rows)
    if (row.init_theta == init_theta && row.theta == theta) return &row;
  return nullptr;
}

HysteresisResult hysteresis_run(const BipartiteNetwork& net, const HysteresisProtocol& protocol,
                                const ExperimentOptions& options) {
  require_nonempty(protocol.theta_grid.size(), "theta grid");
  require_nonempty(options.replicas, "replica count");
  const std::size_t r_count = options.replicas;
  const double init_thetas[2] = {protocol.low_init_theta, protocol.high_init_theta};

  // Stage 1: stationary states from the input network under each initial theta.
  std::vector<BipartiteNetwork> terminal(2 * r_count);
  std::vector<RunSummary> init_runs(2 * r_count);
  parallel_for(2 * r_count, options.jobs, [&](std::size_t task) {
    const std::size_t branch = task / r_count, r = task % r_count;
    BipartiteNetwork copy = net;
    const auto cfg = with(protocol.base, init_thetas[branch], protocol.base.p,
                          replica_seed(protocol.base.seed, r));
    init_runs[task] = summarize(run_to_stationarity(copy, cfg));
    terminal[task] = std::move(copy);
  });

  // Stage 2: continue from each terminal state at every grid theta.
  const std::size_t g_count = protocol.theta_grid.size();
  std::vector<RunSummary> runs(2 * g_count * r_count);
  parallel_for(runs.size(), options.jobs, [&](std::size_t task) {
    const std::size_t r = task % r_count;
    const std::size_t g = (task / r_count) % g_count;
    const std::size_t branch = task / (r_count * g_count);
    BipartiteNetwork copy = terminal[branch * r_count + r];
    const auto seed = derive_seed(replica_seed(protocol.base.seed, r), {0x2u});
    runs[task] = summarize(run_to_stationarity(copy, with(protocol.base, protocol.theta_grid[g], protocol.base.p, seed)));
  });

  HysteresisResult result;
  result.low_init = collect(std::span(init_runs).subspan(0, r_count));
  result.high_init = collect(std::span(init_runs).subspan(r_count, r_count));
  for (std::size_t branch = 0; branch < 2; ++branch)
    for (std::size_t g = 0; g < g_count; ++g) {
      const std::size_t first = (branch * g_count + g) * r_count;
      result.rows.push_back({init_thetas[branch], protocol.theta_grid[g],
                             collect(std::span(runs).subspan(first, r_count))});
    }
  return result;
}

// ---------------------------------------------------------------------------

std::string_view to_string(DensityMode mode) {
  switch (mode) {
    case DensityMode::link_removal: return "link";
    case DensityMode::user_removal: return "user";
    case DensityMode::item_removal: return "item";
  }
  return "link";
}

DensityMode parse_density_mode(std::string_view text) {
  if (text == "link" || text == "link_removal") return DensityMode::link_removal;
  if (text == "user" || text == "user_removal") return DensityMode::user_removal;
  if (text == "item" || text == "item_removal") return DensityMode::item_removal;
  throw InvalidInput("unknown density mode '" + std::string(text) + "' (expected link, user or item)");
}

double link_density(const BipartiteNetwork& net) {
  return static_cast<double>(net.n_links()) /
         (static_cast<double>(net.n_users()) * static_cast<double>(net.n_items()));
}

ReducedNetwork modify_density(const BipartiteNetwork& net, const DensitySpec& spec) {
  if (!(spec.retain > 0.0 && spec.retain <= 1.0))
    throw ContractViolation("density retain fraction must lie in (0, 1]");
  Rng rng(spec.seed);
  auto links = net.links();
  std::vector<bool> drop_link(links.size(), false);
  std::vector<bool> drop_user(net.n_users(), false), drop_item(net.n_items(), false);

  auto sample_drop = [&](std::size_t universe, std::vector<bool>& drop) {
    const auto keep = static_cast<std::size_t>(std::llround(spec.retain * static_cast<double>(universe)));
    if (keep == 0) throw ContractViolation("density target removes every " + std::string(to_string(spec.mode)));
    std::vector<std::size_t> ids(universe);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = keep; i < universe; ++i) drop[ids[i]] = true;
  };

  switch (spec.mode) {
    case DensityMode::link_removal: {
      std::size_t active_users = 0;
      for (UserId u = 0; u < net.n_users(); ++u) active_users += net.user_degree(u) > 0;
      const auto target = static_cast<std::size_t>(std::llround(spec.retain * static_cast<double>(links.size())));
      if (target < active_users)
        throw ContractViolation("density target " + std::to_string(target) +
                                " links is below the one-link-per-user floor " + std::to_string(active_users));
      auto degree = net.user_degrees();
      std::vector<std::size_t> order(links.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t remaining = links.size();
      for (std::size_t idx : order) {
        if (remaining <= target) break;
        auto& d = degree[links[idx].user];
        if (d <= 1) continue;
        --d;
        --remaining;
        drop_link[idx] = true;
      }
      break;
    }
    case DensityMode::user_removal:
      sample_drop(net.n_users(), drop_user);
      break;
    case DensityMode::item_removal:
      sample_drop(net.n_items(), drop_item);
      break;
  }

  for (std::size_t i = 0; i < links.size(); ++i)
    if (drop_user[links[i].user] || drop_item[links[i].item]) drop_link[i] = true;

  // Users without surviving links cannot take part in rewiring.
  std::vector<std::size_t> surviving(net.n_users(), 0);
  for (std::size_t i = 0; i < links.size(); ++i)
    if (!drop_link[i]) ++surviving[links[i].user];

  ReducedNetwork out;
  std::vector<UserId> user_new(net.n_users(), 0);
  std::vector<ItemId> item_new(net.n_items(), 0);
  for (UserId u = 0; u < net.n_users(); ++u)
    if (surviving[u] > 0) {
      user_new[u] = static_cast<UserId>(out.user_origin.size());
      out.user_origin.push_back(u);
    }
  for (ItemId a = 0; a < net.n_items(); ++a)
    if (!drop_item[a]) {
      item_new[a] = static_cast<ItemId>(out.item_origin.size());
      out.item_origin.push_back(a);
    }
  if (out.user_origin.empty()) throw ContractViolation("density target leaves no links");

  std::vector<Link> kept;
  for (std::size_t i = 0; i < links.size(); ++i)
    if (!drop_link[i]) kept.push_back({user_new[links[i].user], item_new[links[i].item], links[i].timestamp});
  out.network = BipartiteNetwork::from_links(out.user_origin.size(), out.item_origin.size(), kept,
                                             net.clock(), net.seed());
  return out;
}

std::vector<DensitySweepRow> density_sweep(const BipartiteNetwork& net, std::span<const double> retains,
                                           std::span<const DensityMode> modes,
                                           std::span<const double> thetas, const RewiringConfig& base,
                                           const ExperimentOptions& options) {
  require_nonempty(retains.size(), "density grid");
  require_nonempty(modes.size(), "density modes");
  require_nonempty(thetas.size(), "method grid");
  require_nonempty(options.replicas, "replica count");
  const std::size_t r_count = options.replicas;
  const std::size_t n_tasks = modes.size() * retains.size() * thetas.size() * r_count;

  struct Outcome {
    RunSummary run;
    double original_gini = 0.0;
    double density = 0.0;
    double mean_item_degree = 0.0;
  };
  std::vector<Outcome> outcomes(n_tasks);
  parallel_for(n_tasks, options.jobs, [&](std::size_t task) {
    std::size_t rest = task;
    const std::size_t r = rest % r_count;
    rest /= r_count;
    const std::size_t ti = rest % thetas.size();
    rest /= thetas.size();
    const std::size_t di = rest % retains.size();
    const std::size_t mi = rest / retains.size();

    const DensitySpec spec{modes[mi], retains[di],
                           derive_seed(base.seed, {r, static_cast<std::uint64_t>(modes[mi]), double_bits(retains[di])})};
    auto reduced = modify_density(net, spec);
    Outcome& o = outcomes[task];
    o.original_gini = gini(reduced.network.item_degrees());
    o.density = link_density(reduced.network);
    o.mean_item_degree = static_cast<double>(reduced.network.n_links()) / static_cast<double>(reduced.network.n_items());
    o.run = summarize(run_to_stationarity(reduced.network, with(base, thetas[ti], 1.0, replica_seed(base.seed, r))));
  });

  std::vector<DensitySweepRow> rows;
  for (std::size_t mi = 0; mi < modes.size(); ++mi)
    for (std::size_t di = 0; di < retains.size(); ++di)
      for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
        const std::size_t first = ((mi * retains.size() + di) * thetas.size() + ti) * r_count;
        std::vector<RunSummary> runs;
        DensitySweepRow row{modes[mi], retains[di], thetas[ti], 0.0, 0.0, 0.0, {}};
        for (std::size_t r = 0; r < r_count; ++r) {
          const auto& o = outcomes[first + r];
          runs.push_back(o.run);
          row.original_gini += o.original_gini / static_cast<double>(r_count);
          row.density += o.density / static_cast<double>(r_count);
          row.mean_item_degree += o.mean_item_degree / static_cast<double>(r_count);
        }
        row.gstar = collect(runs);
        rows.push_back(std::move(row));
      }
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<TradeoffRow> tradeoff_curve(const BipartiteNetwork& net, std::span<const double> thetas,
                                        const SplitSpec& split, const RewiringConfig& base,
                                        const ExperimentOptions& options) {
  require_nonempty(thetas.size(), "theta grid");
  std::vector<EvaluationReport> reports(thetas.size());
  parallel_for(thetas.size(), options.jobs, [&](std::size_t i) {
    reports[i] = evaluate(net, split, thetas[i], base.list_length, 1);
  });
  const double ps[1] = {base.p};
  const auto sweep_rows = theta_sweep(net, thetas, ps, base, options);

  std::vector<TradeoffRow> rows;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    rows.push_back({thetas[i], reports[i].precision, reports[i].short_term_diversity, sweep_rows[i].gstar});
  return rows;
}

TradeoffCost precision_cost(std::span<const TradeoffRow> curve, double target_gini) {
  require_nonempty(curve.size(), "trade-off curve");
  const auto best = std::max_element(curve.begin(), curve.end(), [](const TradeoffRow& a, const TradeoffRow& b) {
    return a.precision < b.precision;
  });
  TradeoffCost cost{best->theta, best->precision, std::nullopt, 1.0};

  auto offer = [&](double precision) {
    if (!cost.constrained_precision || precision > *cost.constrained_precision) cost.constrained_precision = precision;
  };
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].gstar.mean <= target_gini) offer(curve[i].precision);
    if (i + 1 == curve.size()) continue;
    const double g0 = curve[i].gstar.mean, g1 = curve[i + 1].gstar.mean;
    if ((g0 - target_gini) * (g1 - target_gini) < 0.0) {
      const double t = (target_gini - g0) / (g1 - g0);
      offer(curve[i].precision + t * (curve[i + 1].precision - curve[i].precision));
    }
  }
  if (cost.constrained_precision && cost.optimal_precision > 0.0)
    cost.relative_cost = 1.0 - *cost.constrained_precision / cost.optimal_precision;
  return cost;
}

}  // namespace recsim
