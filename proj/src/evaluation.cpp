#include "recsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recsim/error.hpp"
#include "recsim/parallel.hpp"
#include "recsim/recommender.hpp"

namespace recsim {

void SplitSpec::validate() const {
  if (!(probe_fraction > 0.0 && probe_fraction < 1.0))
    throw ContractViolation("probe fraction must lie in (0, 1)");
  if (n_divisions < 1) throw ContractViolation("at least one division is required");
}

TrainProbe split_train_probe(const BipartiteNetwork& net, const SplitSpec& spec,
                             std::size_t division_index) {
  spec.validate();
  const auto links = net.links();
  const auto n_probe = static_cast<std::size_t>(
      std::floor(spec.probe_fraction * static_cast<double>(links.size())));
  if (n_probe == 0) throw ContractViolation("probe fraction leaves the probe set empty");

  std::vector<std::size_t> order(links.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(spec.seed, {division_index, 0x5b1u}));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> in_probe(links.size(), false);
  for (std::size_t i = 0; i < n_probe; ++i) in_probe[order[i]] = true;

  TrainProbe out;
  std::vector<Link> train;
  train.reserve(links.size() - n_probe);
  out.probe.reserve(n_probe);
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (in_probe[i]) out.probe.push_back({links[i].user, links[i].item});
    else train.push_back(links[i]);
  }
  std::sort(out.probe.begin(), out.probe.end(), [](const Edge& a, const Edge& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  });
  out.train = BipartiteNetwork::from_links(net.n_users(), net.n_items(), train, net.clock(), net.seed());
  return out;
}

DivisionResult evaluate_division(const BipartiteNetwork& train, std::span<const Edge> probe,
                                 double theta, std::size_t list_length, Rng& rng) {
  std::vector<std::vector<ItemId>> probe_items(train.n_users());
  for (const auto& e : probe) {
    if (e.user >= train.n_users() || e.item >= train.n_items())
      throw ContractViolation("probe link outside the train id space");
    probe_items[e.user].push_back(e.item);
  }
  for (auto& v : probe_items) std::sort(v.begin(), v.end());

  Recommender rec(theta, list_length);
  DivisionResult result;
  double precision_sum = 0.0;
  double degree_sum = 0.0;
  for (UserId u = 0; u < train.n_users(); ++u) {
    if (train.user_degree(u) == 0) continue;
    const auto& list = rec.recommend(train, u, rng);
    for (const auto& entry : list) degree_sum += train.item_degree(entry.item);
    result.listed_items += list.size();

    const auto& held_out = probe_items[u];
    if (held_out.empty()) continue;
    std::size_t hits = 0;
    for (const auto& entry : list)
      if (std::binary_search(held_out.begin(), held_out.end(), entry.item)) ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(list_length);
    ++result.eligible_users;
  }
  if (result.eligible_users > 0)
    result.precision = precision_sum / static_cast<double>(result.eligible_users);
  if (result.listed_items > 0)
    result.short_term_diversity = degree_sum / static_cast<double>(result.listed_items);
  return result;
}

double precision_at_L(const BipartiteNetwork& train, std::span<const Edge> probe, double theta,
                      std::size_t list_length, Rng& rng) {
  const auto r = evaluate_division(train, probe, theta, list_length, rng);
  if (r.eligible_users == 0) throw ContractViolation("no user has both probe and train links");
  return r.precision;
}

double short_term_diversity(const BipartiteNetwork& train, double theta, std::size_t list_length,
                            Rng& rng) {
  const auto r = evaluate_division(train, {}, theta, list_length, rng);
  if (r.listed_items == 0) throw ContractViolation("every recommendation list is empty");
  return r.short_term_diversity;
}

std::vector<double> EvaluationReport::precision_per_division() const {
  std::vector<double> out;
  for (const auto& d : divisions) out.push_back(d.precision);
  return out;
}

EvaluationReport evaluate(const BipartiteNetwork& net, const SplitSpec& spec, double theta,
                          std::size_t list_length, std::size_t jobs) {
  spec.validate();
  EvaluationReport report;
  report.theta = theta;
  report.list_length = list_length;
  report.divisions.resize(spec.n_divisions);
  parallel_for(spec.n_divisions, jobs, [&](std::size_t d) {
    const auto split = split_train_probe(net, spec, d);
    Rng rng(derive_seed(spec.seed, {d, 0x71eu}));
    auto r = evaluate_division(split.train, split.probe, theta, list_length, rng);
    if (r.eligible_users == 0) throw ContractViolation("no user has both probe and train links");
    r.division = d;
    report.divisions[d] = r;
  });
  for (const auto& d : report.divisions) {
    report.precision += d.precision;
    report.short_term_diversity += d.short_term_diversity;
  }
  report.precision /= static_cast<double>(spec.n_divisions);
  report.short_term_diversity /= static_cast<double>(spec.n_divisions);
  return report;
}

}  // namespace recsim
