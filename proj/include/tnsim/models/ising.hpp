#pragma once

// 2D transverse-field Ising model H = -J sum_<ij> sz_i sz_j - h sum_i sx_i
// on an nx x ny lattice, mapped to a chain by snake (boustrophedon)
// ordering. An optional pinning field -pin * sz on chain site 0 selects one
// ferromagnetic branch at small h so |M_z| is well defined at finite size.

#include <stdexcept>
#include <vector>

#include "tnsim/mps.hpp"
#include "tnsim/terms.hpp"

namespace tnsim {

enum class BoundaryCondition { Open, Periodic };

struct IsingParams {
  std::size_t nx = 2;
  std::size_t ny = 2;
  double j = 1.0;
  double h = 1.0;
  BoundaryCondition bc = BoundaryCondition::Open;
  double pin = 0.0;  // pinning field strength, 0 disables

  void validate() const {
    if (nx < 2) throw std::invalid_argument("ising: nx must be >= 2");
    if (ny < 1) throw std::invalid_argument("ising: ny must be >= 1");
    if (!(j > 0.0)) throw std::invalid_argument("ising: ferromagnetic J > 0");
    if (!std::isfinite(h) || !std::isfinite(pin))
      throw std::invalid_argument("ising: non-finite parameters");
  }
};

// snake ordering: even rows run left-to-right, odd rows right-to-left
inline std::size_t ising_site_index(const IsingParams& p, std::size_t x,
                                    std::size_t y) {
  return y * p.nx + (y % 2 == 0 ? x : p.nx - 1 - x);
}

struct IsingModel {
  TermList terms;
  BasisChain bases;
};

inline IsingModel ising2d_terms(const IsingParams& p) {
  p.validate();
  IsingModel model;
  model.bases = BasisChain(p.nx * p.ny, SiteBasis::spin_half());

  auto bond = [&](std::size_t a, std::size_t b) {
    if (a == b) return;  // degenerate wrap on a 1-wide direction
    model.terms.push_back(
        term(-p.j, {{std::min(a, b), "sz"}, {std::max(a, b), "sz"}}));
  };
  for (std::size_t y = 0; y < p.ny; ++y) {
    for (std::size_t x = 0; x < p.nx; ++x) {
      if (x + 1 < p.nx) bond(ising_site_index(p, x, y), ising_site_index(p, x + 1, y));
      if (y + 1 < p.ny) bond(ising_site_index(p, x, y), ising_site_index(p, x, y + 1));
      if (p.bc == BoundaryCondition::Periodic) {
        if (x + 1 == p.nx && p.nx > 1)
          bond(ising_site_index(p, x, y), ising_site_index(p, 0, y));
        if (y + 1 == p.ny && p.ny > 1)
          bond(ising_site_index(p, x, y), ising_site_index(p, x, 0));
      }
    }
  }
  if (p.h != 0.0)
    for (std::size_t i = 0; i < p.nx * p.ny; ++i)
      model.terms.push_back(term(-p.h, {{i, "sx"}}));
  if (p.pin != 0.0) model.terms.push_back(term(-p.pin, {{0, "sz"}}));
  return model;
}

inline MatrixProductState ising_all_up_state(const IsingParams& p) {
  p.validate();
  BasisChain bases(p.nx * p.ny, SiteBasis::spin_half());
  VectorXc up(2);
  up << 1.0, 0.0;
  return MatrixProductState::product_state(
      bases, std::vector<VectorXc>(p.nx * p.ny, up));
}

}  // namespace tnsim
