#include "recsim/attachment.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "recsim/error.hpp"

namespace recsim {

namespace {

// Integer weights keep the sampled distribution exact.
template <class Excluded>
ItemId weighted_draw(const BipartiteNetwork& net, Excluded is_excluded, std::uint64_t total,
                     bool preferential, Rng& rng) {
  if (total == 0) throw ContractViolation("every item is excluded");
  std::uint64_t target = std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
  const auto degrees = net.item_degrees();
  for (ItemId a = 0; a < net.n_items(); ++a) {
    if (is_excluded(a)) continue;
    const std::uint64_t w = preferential ? std::uint64_t{degrees[a]} + 1 : 1;
    if (target < w) return a;
    target -= w;
  }
  throw ContractViolation("attachment weights are inconsistent");
}

std::vector<bool> exclusion_mask(const BipartiteNetwork& net, std::span<const ItemId> excluded) {
  std::vector<bool> mask(net.n_items(), false);
  for (ItemId a : excluded) {
    if (a >= net.n_items()) throw ContractViolation("excluded item id out of range");
    mask[a] = true;
  }
  return mask;
}

template <class Excluded>
std::uint64_t total_weight(const BipartiteNetwork& net, Excluded is_excluded, bool preferential) {
  std::uint64_t total = 0;
  const auto degrees = net.item_degrees();
  for (ItemId a = 0; a < net.n_items(); ++a)
    if (!is_excluded(a)) total += preferential ? std::uint64_t{degrees[a]} + 1 : 1;
  return total;
}

// Weight of the non-excluded items when the exclusion set is the user's items.
std::uint64_t user_total(const BipartiteNetwork& net, UserId user, bool preferential) {
  const std::uint64_t m = net.n_items();
  const auto held = net.user_links(user);
  if (!preferential) return m - held.size();
  std::uint64_t total = net.n_links() + m;
  for (const auto& h : held) total -= std::uint64_t{net.item_degree(h.item)} + 1;
  return total;
}

}  // namespace

std::string_view to_string(AttachmentMode mode) {
  return mode == AttachmentMode::preferential ? "pa" : "ra";
}

AttachmentMode parse_attachment(std::string_view text) {
  if (text == "pa" || text == "preferential") return AttachmentMode::preferential;
  if (text == "ra" || text == "random") return AttachmentMode::random;
  throw InvalidInput("unknown attachment mode '" + std::string(text) + "' (expected pa or ra)");
}

ItemId preferential_pick(const BipartiteNetwork& net, std::span<const ItemId> excluded, Rng& rng) {
  const auto mask = exclusion_mask(net, excluded);
  auto is_excluded = [&](ItemId a) { return static_cast<bool>(mask[a]); };
  return weighted_draw(net, is_excluded, total_weight(net, is_excluded, true), true, rng);
}

ItemId random_pick(const BipartiteNetwork& net, std::span<const ItemId> excluded, Rng& rng) {
  const auto mask = exclusion_mask(net, excluded);
  auto is_excluded = [&](ItemId a) { return static_cast<bool>(mask[a]); };
  return weighted_draw(net, is_excluded, total_weight(net, is_excluded, false), false, rng);
}

ItemId preferential_pick_for(const BipartiteNetwork& net, UserId user, Rng& rng) {
  auto is_excluded = [&](ItemId a) { return net.has_link(user, a); };
  return weighted_draw(net, is_excluded, user_total(net, user, true), true, rng);
}

ItemId random_pick_for(const BipartiteNetwork& net, UserId user, Rng& rng) {
  auto is_excluded = [&](ItemId a) { return net.has_link(user, a); };
  return weighted_draw(net, is_excluded, user_total(net, user, false), false, rng);
}

ItemId attachment_pick_for(const BipartiteNetwork& net, UserId user, AttachmentMode mode,
                           Rng& rng) {
  return mode == AttachmentMode::preferential ? preferential_pick_for(net, user, rng)
                                              : random_pick_for(net, user, rng);
}

}  // namespace recsim
