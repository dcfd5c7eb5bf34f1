#include "kxchain/params.hpp"

#include <algorithm>
#include <cmath>

#include "kxchain/errors.hpp"

namespace kxchain {

DivisorPolicy DivisorPolicy::constant(std::size_t value) {
  if (value == 0) throw PreconditionViolated("divisor must be positive");
  return DivisorPolicy{value};
}

std::size_t DivisorPolicy::evaluate(std::size_t n) const {
  if (fixed) return *fixed;
  if (n < 2) return 2;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::log(static_cast<double>(n)))));
}

MechParamsS MechParamsS::derive(std::size_t s, std::size_t f_value) {
  if (s == 0) throw PreconditionViolated("parameter s must be at least 1");
  if (f_value == 0) throw PreconditionViolated("divisor must be positive");
  MechParamsS p;
  p.s = s;
  p.f_value = f_value;
  p.s_prime = std::max<std::size_t>(2, s / f_value);
  p.s_dprime = std::max<std::size_t>(1, s / (f_value * f_value));
  p.s_prime = std::max(p.s_prime, 2 * p.s_dprime);
  return p;
}

MechParamsAvg MechParamsAvg::derive(std::size_t s, std::size_t f_value) {
  if (s == 0) throw PreconditionViolated("parameter s must be at least 1");
  if (f_value == 0) throw PreconditionViolated("divisor must be positive");
  return {s, std::max<std::size_t>(1, s / (f_value * f_value)), f_value};
}

}  // namespace kxchain
