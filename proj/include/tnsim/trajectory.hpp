#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tnsim {

// Sampled time series from one propagation run, t = 0 included. Observable
// columns keep their insertion order so CSV output is deterministic.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::pair<std::string, std::vector<double>>> observables;
  std::vector<double> norms;
  std::vector<double> energies;
  std::vector<std::size_t> bond_profile;

  const std::vector<double>& series(const std::string& name) const {
    for (const auto& [n, s] : observables)
      if (n == name) return s;
    throw std::invalid_argument("trajectory: no observable '" + name + "'");
  }

  std::size_t samples() const { return times.size(); }
};

}  // namespace tnsim
