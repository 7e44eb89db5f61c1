#pragma once

// Spin-boson model H = (Delta/2) sx + (eps/2) sz + sum_k w_k b^t b
//                     + (sz/2) sum_k g_k (b^t + b)
// with the continuous bath J(w) = 2 pi alpha w_c^{1-s} w^s e^{-w/w_c}
// replaced by n_modes discrete oscillators on the exponential grid
//   w_k = -w_c ln(1 - k/(N_b+1)),  k = 1..N_b.
// The couplings follow from g_k^2 = J(w_k) / (pi rho(w_k)) with the mode
// density rho(w) = ((N_b+1)/w_c) e^{-w/w_c} whose cumulative inverse is
// exactly the grid above, giving g_k = sqrt(2 alpha w_c^{2-s} w_k^s/(N_b+1)).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tnsim/mps.hpp"
#include "tnsim/terms.hpp"

namespace tnsim {

struct SpinBosonParams {
  double delta = 1.0;
  double eps = 0.0;
  double alpha = 0.0;
  double s = 1.0;
  double omega_c = 10.0;
  std::size_t n_modes = 4;
  std::size_t d_b = 10;

  void validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("spin_boson: alpha < 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("spin_boson: omega_c <= 0");
    if (!(s > 0.0)) throw std::invalid_argument("spin_boson: s <= 0");
    if (n_modes < 1) throw std::invalid_argument("spin_boson: n_modes < 1");
    if (d_b < 2) throw std::invalid_argument("spin_boson: d_b < 2");
  }
};

struct BathDiscretization {
  std::vector<double> omegas;
  std::vector<double> couplings;
};

inline BathDiscretization discretize_bath(double alpha, double s,
                                          double omega_c,
                                          std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("discretize_bath: n_modes = 0");
  if (!(s > 0.0)) throw std::invalid_argument("discretize_bath: s <= 0");
  if (!(omega_c > 0.0) || !(alpha >= 0.0))
    throw std::invalid_argument("discretize_bath: bad parameters");
  BathDiscretization bath;
  bath.omegas.reserve(n_modes);
  bath.couplings.reserve(n_modes);
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const double w =
        -omega_c * std::log1p(-double(k) / double(n_modes + 1));
    const double g = std::sqrt(2.0 * alpha * std::pow(omega_c, 2.0 - s) *
                               std::pow(w, s) / double(n_modes + 1));
    bath.omegas.push_back(w);
    bath.couplings.push_back(g);
  }
  return bath;
}

struct SpinBosonModel {
  TermList terms;
  BasisChain bases;
  BathDiscretization bath;
};

inline SpinBosonModel spin_boson_terms(const SpinBosonParams& p) {
  p.validate();
  SpinBosonModel model;
  model.bath = discretize_bath(p.alpha, p.s, p.omega_c, p.n_modes);
  model.bases.push_back(SiteBasis::spin_half());
  for (std::size_t k = 0; k < p.n_modes; ++k)
    model.bases.push_back(SiteBasis::boson(p.d_b));

  model.terms.push_back(term(p.delta / 2.0, {{0, "sx"}}));
  if (p.eps != 0.0) model.terms.push_back(term(p.eps / 2.0, {{0, "sz"}}));
  for (std::size_t k = 0; k < p.n_modes; ++k) {
    model.terms.push_back(term(model.bath.omegas[k], {{k + 1, "n"}}));
    if (model.bath.couplings[k] != 0.0)
      model.terms.push_back(term(model.bath.couplings[k] / 2.0,
                                 {{0, "sz"}, {k + 1, "b_plus_bdag"}}));
  }
  return model;
}

// |up> x vacuum^{N_b}; all bonds 1, so expand_bond is required before
// one-site TDVP.
inline MatrixProductState spin_boson_initial_state(const SpinBosonParams& p) {
  p.validate();
  BasisChain bases;
  bases.push_back(SiteBasis::spin_half());
  for (std::size_t k = 0; k < p.n_modes; ++k)
    bases.push_back(SiteBasis::boson(p.d_b));
  std::vector<VectorXc> local;
  VectorXc up(2);
  up << 1.0, 0.0;
  local.push_back(up);
  for (std::size_t k = 0; k < p.n_modes; ++k) {
    VectorXc vac = VectorXc::Zero(p.d_b);
    vac[0] = 1.0;
    local.push_back(vac);
  }
  return MatrixProductState::product_state(std::move(bases), local);
}

}  // namespace tnsim
