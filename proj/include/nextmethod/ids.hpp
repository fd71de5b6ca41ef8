#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace nextmethod {

/// Dense, globally unique identifier of a mined method. Assigned in mining
/// order (commit timestamp, file, textual position), so ordering is stable.
struct MethodId {
    std::uint64_t value = 0;
    auto operator<=>(const MethodId&) const = default;
};

/// Dense identifier of a cluster inside one model.
struct ClusterId {
    std::uint32_t value = 0;
    auto operator<=>(const ClusterId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, MethodId id) { return os << 'm' << id.value; }
inline std::ostream& operator<<(std::ostream& os, ClusterId id) { return os << 'C' << id.value; }

/// Sorted, duplicate-free set of cluster ids. Used for transactions, rule
/// sides and candidate LHSs.
using ItemSet = std::vector<ClusterId>;

/// Sorts and deduplicates in place.
void normalize(ItemSet& items);
ItemSet make_itemset(std::vector<ClusterId> items);
bool contains(const ItemSet& items, ClusterId id);

}  // namespace nextmethod

template <>
struct std::hash<nextmethod::MethodId> {
    std::size_t operator()(nextmethod::MethodId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

template <>
struct std::hash<nextmethod::ClusterId> {
    std::size_t operator()(nextmethod::ClusterId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
