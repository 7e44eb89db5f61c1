#pragma once

#include <stdexcept>

namespace tnsim {

// CODATA hartree in electron volts.
inline constexpr double kHartreeInEv = 27.211386245988;

inline double ev_to_hartree(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("ev_to_hartree: non-finite");
  return x / kHartreeInEv;
}

inline double hartree_to_ev(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("hartree_to_ev: non-finite");
  return x * kHartreeInEv;
}

}  // namespace tnsim
