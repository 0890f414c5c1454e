#pragma once

#include <span>
#include <string_view>

#include "recsim/network.hpp"
#include "recsim/random.hpp"

namespace recsim {

enum class AttachmentMode { preferential, random };

std::string_view to_string(AttachmentMode mode);
/// Accepts "pa"/"preferential" and "ra"/"random".
AttachmentMode parse_attachment(std::string_view text);

/// Item drawn with probability proportional to k + 1 among items not in `excluded`.
ItemId preferential_pick(const BipartiteNetwork& net, std::span<const ItemId> excluded, Rng& rng);
/// Uniformly random item among those not in `excluded`.
ItemId random_pick(const BipartiteNetwork& net, std::span<const ItemId> excluded, Rng& rng);

// Same draws with the exclusion set being the user's current items. Used on
// the rewiring hot path; the exclusion test is a bit lookup.
ItemId preferential_pick_for(const BipartiteNetwork& net, UserId user, Rng& rng);
ItemId random_pick_for(const BipartiteNetwork& net, UserId user, Rng& rng);

ItemId attachment_pick_for(const BipartiteNetwork& net, UserId user, AttachmentMode mode, Rng& rng);

}  // namespace recsim
