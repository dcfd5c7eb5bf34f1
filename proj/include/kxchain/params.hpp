#pragma once

#include <cstddef>
#include <optional>

#include "kxchain/search.hpp"

namespace kxchain {

/// The slowly growing divisor f(n). Default: max(2, floor(ln n)).
struct DivisorPolicy {
  std::optional<std::size_t> fixed;

  static DivisorPolicy natural_log() { return {}; }
  static DivisorPolicy constant(std::size_t value);

  std::size_t evaluate(std::size_t n) const;
};

struct MechParamsS {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  std::size_t s_dprime = 0;
  std::size_t f_value = 0;

  /// s' = max(2, s/f), s'' = max(1, s/f^2), then s' raised to 2 s'' if needed.
  static MechParamsS derive(std::size_t s, std::size_t f_value);
};

struct MechParamsAvg {
  std::size_t s = 0;
  std::size_t s_prime = 0;
  std::size_t f_value = 0;

  /// s' = max(1, s/f^2).
  static MechParamsAvg derive(std::size_t s, std::size_t f_value);
};

struct MechanismConfig {
  DivisorPolicy divisor;
  /// Views reporting fewer nodes fail immediately. 1 disables the guard.
  std::size_t min_n = 1;
  SearchLimits limits;
};

}  // namespace kxchain
