#include "kxchain/stitch.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "kxchain/errors.hpp"

namespace kxchain {

void StitchPlan::validate() const {
  if (window == 0) throw PreconditionViolated("stitch window must be positive");
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    if (sequence[t].path.empty()) throw PreconditionViolated("stitch plan entry " + std::to_string(t) + " is empty");
    if (t > 0 && sequence[t].owner == sequence[t - 1].owner) {
      throw PreconditionViolated("stitch plan entries " + std::to_string(t - 1) + " and " + std::to_string(t) +
                                 " share an owner");
    }
    if (t > 0 && t + 1 < sequence.size() && sequence[t].path.length() < 2 * window) {
      throw PreconditionViolated("stitch plan entry " + std::to_string(t) + " is shorter than twice the window");
    }
  }
}

StitchResult stitch(const StitchPlan& plan, const ViewGraph& view) {
  plan.validate();
  StitchResult result;
  if (plan.sequence.empty()) return result;
  Path out;
  std::size_t head_cut = 0;
  for (std::size_t t = 0; t + 1 < plan.sequence.size(); ++t) {
    const auto& a = plan.sequence[t].path.nodes;
    const auto& b = plan.sequence[t + 1].path.nodes;
    const std::size_t tail_begin = std::max(head_cut, a.size() > plan.window ? a.size() - plan.window : 0);
    const std::size_t head_end = std::min(plan.window, b.size());
    std::optional<StitchLink> best;
    for (std::size_t i = tail_begin; i < a.size(); ++i) {
      for (std::size_t j = 0; j < head_end; ++j) {
        if (!view.has_edge(a[i], b[j])) continue;
        StitchLink link{a[i], b[j], i, j};
        if (!best) {
          best = link;
          continue;
        }
        const long gain = static_cast<long>(i) - static_cast<long>(j);
        const long best_gain = static_cast<long>(best->tail_pos) - static_cast<long>(best->head_pos);
        if (gain > best_gain ||
            (gain == best_gain && std::tie(link.tail, link.head) < std::tie(best->tail, best->head))) {
          best = link;
        }
      }
    }
    if (!best) {
      result.failed_at = t;
      return result;
    }
    out.nodes.insert(out.nodes.end(), a.begin() + static_cast<long>(head_cut),
                     a.begin() + static_cast<long>(best->tail_pos) + 1);
    head_cut = best->head_pos;
    result.links.push_back(*best);
  }
  const auto& last = plan.sequence.back().path.nodes;
  out.nodes.insert(out.nodes.end(), last.begin() + static_cast<long>(head_cut), last.end());
  result.path = std::move(out);
  return result;
}

}  // namespace kxchain
