#pragma once

// Exponential discrete variable representation for a periodic coordinate
// (period 2*pi). Potentials are diagonal on the grid; the kinetic matrix is
// exact for the plane-wave subspace k = -(N-1)/2 .. (N-1)/2.

#include <vector>

#include "tnsim/basis.hpp"

namespace tnsim {

struct ExpDvrBasis {
  std::size_t n_points;
  double inertia;
  std::vector<double> grid;  // theta_j = 2*pi*j/N
  MatrixXc kinetic;          // -(1/2I) d^2/dtheta^2 on the grid
  SiteBasis basis;
};

inline ExpDvrBasis exp_dvr(std::size_t n_points, double inertia) {
  SiteBasis b = SiteBasis::exp_dvr(n_points, inertia);
  return ExpDvrBasis{n_points, inertia, b.grid(), b.op("dvr_kin"), b};
}

}  // namespace tnsim
