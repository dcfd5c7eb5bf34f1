#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace kxchain {

/// Orders items so that no two cyclically adjacent items share a color.
///
/// Colors are processed by decreasing count (ties by color value); items keep
/// their input order within a color. With n1 the largest count, items are
/// dealt round-robin onto n1 stacks and the stacks are concatenated. The
/// result lists item indices; when `first` is given the cycle is rotated so
/// that item comes first. Throws PreconditionViolated when n1 exceeds the sum
/// of the other counts (this includes a single item).
std::vector<std::size_t> arrange_alternating(const std::vector<int>& colors, std::optional<std::size_t> first = {});

/// True when adjacent entries differ, including last and first.
bool cyclically_alternating(const std::vector<int>& colors, const std::vector<std::size_t>& order);

}  // namespace kxchain
