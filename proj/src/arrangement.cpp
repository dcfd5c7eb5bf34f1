#include "kxchain/arrangement.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "kxchain/errors.hpp"

namespace kxchain {

std::vector<std::size_t> arrange_alternating(const std::vector<int>& colors, std::optional<std::size_t> first) {
  if (colors.empty()) return {};
  if (first && *first >= colors.size()) throw PreconditionViolated("first item out of range");
  std::map<int, std::vector<std::size_t>> by_color;
  for (std::size_t i = 0; i < colors.size(); ++i) by_color[colors[i]].push_back(i);
  std::vector<std::pair<int, std::vector<std::size_t>>> groups(by_color.begin(), by_color.end());
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& x, const auto& y) { return x.second.size() > y.second.size(); });
  const std::size_t stacks = groups.front().second.size();
  if (stacks > colors.size() - stacks) {
    throw PreconditionViolated("largest color has " + std::to_string(stacks) + " items but the others only " +
                               std::to_string(colors.size() - stacks));
  }
  std::vector<std::vector<std::size_t>> pile(stacks);
  std::size_t cursor = 0;
  for (const auto& group : groups) {
    for (std::size_t item : group.second) {
      pile[cursor].push_back(item);
      cursor = (cursor + 1) % stacks;
    }
  }
  std::vector<std::size_t> order;
  order.reserve(colors.size());
  for (const auto& stack : pile) order.insert(order.end(), stack.begin(), stack.end());
  if (first) {
    auto it = std::find(order.begin(), order.end(), *first);
    std::rotate(order.begin(), it, order.end());
  }
  return order;
}

bool cyclically_alternating(const std::vector<int>& colors, const std::vector<std::size_t>& order) {
  if (order.size() < 2) return order.size() == colors.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (colors[order[i]] == colors[order[(i + 1) % order.size()]]) return false;
  }
  return true;
}

}  // namespace kxchain
