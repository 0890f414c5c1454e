#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace recsim {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using Tick = std::uint64_t;

struct Edge {
  UserId user;
  ItemId item;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Link {
  UserId user;
  ItemId item;
  Tick timestamp;
  friend bool operator==(const Link&, const Link&) = default;
};

/// One entry of a user's link list.
struct HeldItem {
  ItemId item;
  Tick timestamp;
  friend bool operator==(const HeldItem&, const HeldItem&) = default;
};

/// Timestamped bipartite user-item network.
///
/// Keeps per-user link lists ordered by timestamp, the item degree vector, a
/// dense adjacency bitset and the dense item-item common-neighbour matrix
/// C(a, b) = |users holding both a and b|, all updated incrementally on every
/// rewire. The diagonal of C is kept at zero.
///
/// Memory is O(n_items^2) for the co-occurrence matrix, which is fine for
/// networks with a few thousand items.
class BipartiteNetwork {
 public:
  BipartiteNetwork() = default;

  /// Builds a network whose ids are the contiguous ranges spanned by `edges`.
  /// Timestamps are a seeded uniformly random permutation of 1..E.
  static BipartiteNetwork from_edge_list(std::span<const Edge> edges, std::uint64_t seed);

  /// As above but with explicit id-space sizes, so users or items may be isolated.
  static BipartiteNetwork from_edge_list(std::span<const Edge> edges, std::size_t n_users,
                                         std::size_t n_items, std::uint64_t seed);

  /// Restores a network from explicit links. Timestamps must be unique and
  /// smaller than `clock`.
  static BipartiteNetwork from_links(std::size_t n_users, std::size_t n_items,
                                     std::span<const Link> links, Tick clock,
                                     std::uint64_t seed = 0);

  std::size_t n_users() const { return user_links_.size(); }
  std::size_t n_items() const { return item_degree_.size(); }
  std::size_t n_links() const { return n_links_; }
  Tick clock() const { return clock_; }
  /// Seed used for the initial timestamp permutation (0 when restored).
  std::uint64_t seed() const { return seed_; }

  std::span<const std::uint32_t> item_degrees() const { return item_degree_; }
  std::uint32_t item_degree(ItemId item) const { return item_degree_[item]; }
  std::size_t user_degree(UserId user) const { return user_links_[user].size(); }
  std::vector<std::uint32_t> user_degrees() const;

  /// The user's links, oldest first.
  std::span<const HeldItem> user_links(UserId user) const { return user_links_[user]; }

  bool has_link(UserId user, ItemId item) const {
    return (adjacency_[user * words_per_user_ + item / 64] >> (item % 64)) & 1U;
  }

  std::uint32_t common_neighbors(ItemId a, ItemId b) const {
    return cooccurrence_[static_cast<std::size_t>(a) * n_items() + b];
  }
  /// Row `a` of the co-occurrence matrix (length n_items, zero on the diagonal).
  std::span<const std::uint32_t> common_neighbor_row(ItemId a) const {
    return {cooccurrence_.data() + static_cast<std::size_t>(a) * n_items(), n_items()};
  }

  Link oldest_link(UserId user) const;

  /// Replaces (user, old_item) by (user, new_item) stamped with the current
  /// clock, then advances the clock.
  void rewire_link(UserId user, ItemId old_item, ItemId new_item);

  /// All links ordered by (user, timestamp).
  std::vector<Link> links() const;

  friend bool operator==(const BipartiteNetwork& a, const BipartiteNetwork& b) {
    return a.clock_ == b.clock_ && a.item_degree_ == b.item_degree_ &&
           a.user_links_ == b.user_links_;
  }

 private:
  BipartiteNetwork(std::size_t n_users, std::size_t n_items);

  void check_user(UserId user) const;
  void check_item(ItemId item) const;
  void insert_link(UserId user, ItemId item, Tick timestamp);
  void set_bit(UserId user, ItemId item, bool on);
  std::uint32_t& cooc(ItemId a, ItemId b) {
    return cooccurrence_[static_cast<std::size_t>(a) * n_items() + b];
  }

  std::vector<std::vector<HeldItem>> user_links_;
  std::vector<std::uint32_t> item_degree_;
  std::vector<std::uint64_t> adjacency_;
  std::size_t words_per_user_ = 0;
  std::vector<std::uint32_t> cooccurrence_;
  std::size_t n_links_ = 0;
  Tick clock_ = 1;
  std::uint64_t seed_ = 0;
};

}  // namespace recsim
