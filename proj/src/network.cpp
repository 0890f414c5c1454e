#include "recsim/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "recsim/error.hpp"
#include "recsim/random.hpp"

namespace recsim {

namespace {

std::string pair_str(UserId u, ItemId i) {
  return "(" + std::to_string(u) + ", " + std::to_string(i) + ")";
}

}  // namespace

BipartiteNetwork::BipartiteNetwork(std::size_t n_users, std::size_t n_items)
    : user_links_(n_users),
      item_degree_(n_items, 0),
      words_per_user_((n_items + 63) / 64),
      cooccurrence_(n_items * n_items, 0) {
  adjacency_.assign(n_users * words_per_user_, 0);
}

BipartiteNetwork BipartiteNetwork::from_edge_list(std::span<const Edge> edges,
                                                  std::uint64_t seed) {
  if (edges.empty()) throw InvalidInput("edge list is empty");
  UserId max_user = 0;
  ItemId max_item = 0;
  for (const auto& e : edges) {
    max_user = std::max(max_user, e.user);
    max_item = std::max(max_item, e.item);
  }
  return from_edge_list(edges, std::size_t{max_user} + 1, std::size_t{max_item} + 1, seed);
}

BipartiteNetwork BipartiteNetwork::from_edge_list(std::span<const Edge> edges,
                                                  std::size_t n_users, std::size_t n_items,
                                                  std::uint64_t seed) {
  if (edges.empty()) throw InvalidInput("edge list is empty");
  std::vector<Tick> stamps(edges.size());
  std::iota(stamps.begin(), stamps.end(), Tick{1});
  Rng rng(seed);
  std::shuffle(stamps.begin(), stamps.end(), rng);

  std::vector<Link> links;
  links.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    links.push_back({edges[i].user, edges[i].item, stamps[i]});
  return from_links(n_users, n_items, links, Tick{edges.size()} + 1, seed);
}

BipartiteNetwork BipartiteNetwork::from_links(std::size_t n_users, std::size_t n_items,
                                              std::span<const Link> links, Tick clock,
                                              std::uint64_t seed) {
  if (n_users == 0 || n_items == 0) throw InvalidInput("network must have users and items");
  BipartiteNetwork net(n_users, n_items);
  net.clock_ = clock;
  net.seed_ = seed;

  std::unordered_set<Tick> seen_stamps;
  seen_stamps.reserve(links.size());
  for (const auto& l : links) {
    if (l.user >= n_users || l.item >= n_items)
      throw InvalidInput("link " + pair_str(l.user, l.item) + " is outside the id space");
    if (net.has_link(l.user, l.item)) throw InvalidInput("duplicate edge " + pair_str(l.user, l.item));
    if (l.timestamp >= clock)
      throw InvalidInput("timestamp " + std::to_string(l.timestamp) + " is not below clock " +
                         std::to_string(clock));
    if (!seen_stamps.insert(l.timestamp).second)
      throw InvalidInput("duplicate timestamp " + std::to_string(l.timestamp));
    net.insert_link(l.user, l.item, l.timestamp);
  }
  for (auto& held : net.user_links_)
    std::sort(held.begin(), held.end(),
              [](const HeldItem& a, const HeldItem& b) { return a.timestamp < b.timestamp; });
  return net;
}

std::vector<std::uint32_t> BipartiteNetwork::user_degrees() const {
  std::vector<std::uint32_t> out(n_users());
  for (std::size_t u = 0; u < n_users(); ++u) out[u] = static_cast<std::uint32_t>(user_links_[u].size());
  return out;
}

Link BipartiteNetwork::oldest_link(UserId user) const {
  check_user(user);
  const auto& held = user_links_[user];
  if (held.empty()) throw ContractViolation("user " + std::to_string(user) + " has no links");
  return {user, held.front().item, held.front().timestamp};
}

void BipartiteNetwork::rewire_link(UserId user, ItemId old_item, ItemId new_item) {
  check_user(user);
  check_item(old_item);
  check_item(new_item);
  if (old_item == new_item) throw ContractViolation("rewire target equals the removed item");
  if (!has_link(user, old_item))
    throw ContractViolation("link " + pair_str(user, old_item) + " does not exist");
  if (has_link(user, new_item))
    throw ContractViolation("link " + pair_str(user, new_item) + " already exists");

  auto& held = user_links_[user];
  auto it = std::find_if(held.begin(), held.end(),
                         [&](const HeldItem& h) { return h.item == old_item; });
  held.erase(it);
  for (const auto& h : held) {
    --cooc(old_item, h.item);
    --cooc(h.item, old_item);
    ++cooc(new_item, h.item);
    ++cooc(h.item, new_item);
  }
  --item_degree_[old_item];
  ++item_degree_[new_item];
  set_bit(user, old_item, false);
  set_bit(user, new_item, true);
  held.push_back({new_item, clock_++});
}

std::vector<Link> BipartiteNetwork::links() const {
  std::vector<Link> out;
  out.reserve(n_links_);
  for (std::size_t u = 0; u < n_users(); ++u)
    for (const auto& h : user_links_[u]) out.push_back({static_cast<UserId>(u), h.item, h.timestamp});
  return out;
}

void BipartiteNetwork::check_user(UserId user) const {
  if (user >= n_users()) throw ContractViolation("user id " + std::to_string(user) + " out of range");
}

void BipartiteNetwork::check_item(ItemId item) const {
  if (item >= n_items()) throw ContractViolation("item id " + std::to_string(item) + " out of range");
}

void BipartiteNetwork::insert_link(UserId user, ItemId item, Tick timestamp) {
  auto& held = user_links_[user];
  for (const auto& h : held) {
    ++cooc(item, h.item);
    ++cooc(h.item, item);
  }
  held.push_back({item, timestamp});
  ++item_degree_[item];
  set_bit(user, item, true);
  ++n_links_;
}

void BipartiteNetwork::set_bit(UserId user, ItemId item, bool on) {
  auto& word = adjacency_[user * words_per_user_ + item / 64];
  const std::uint64_t mask = std::uint64_t{1} << (item % 64);
  word = on ? (word | mask) : (word & ~mask);
}

}  // namespace recsim
