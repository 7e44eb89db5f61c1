#pragma once

// Two-state retinal photoisomerization model: diabatic states S0/S1, one
// periodic torsional coordinate treated in the exponential DVR, one
// stretching ("coupling") mode, and a harmonic bath. All harmonic modes use
// dimensionless coordinates R = (b^t + b)/sqrt(2), so H_vib per mode is
// w (n + 1/2) exactly. Parameters arrive in eV or hartree; everything is
// converted to hartree (atomic units) before terms are emitted, with the
// torsional inertia always given in atomic units.
//
//   H0 = p^2/2I + (W0/2)(1 - cos t) + H_vib
//   H1 = p^2/2I + E1 - (W1/2)(1 - cos t) + H_vib + kc Rc + sum_j kj Rj
//   V01 = lambda * Rc

#include <stdexcept>
#include <utility>
#include <vector>

#include "tnsim/dmrg.hpp"
#include "tnsim/models/units.hpp"
#include "tnsim/mps.hpp"
#include "tnsim/terms.hpp"

namespace tnsim {

enum class EnergyUnits { Ev, Hartree };

struct RetinalParams {
  double inertia = 0.0;  // 1/energy, atomic units (never unit-converted)
  double w0 = 0.0;       // ground-state barrier height
  double w1 = 0.0;       // excited-state barrier height
  double e1 = 0.0;       // vertical excitation energy
  double omega_c = 0.0;  // coupling-mode frequency
  double kappa_c = 0.0;  // coupling-mode linear shift on S1
  double lambda = 0.0;   // diabatic coupling strength
  std::vector<std::pair<double, double>> bath;  // (omega_j, kappa_j)
  std::size_t n_theta = 11;
  std::size_t d_modes = 6;
  EnergyUnits input_units = EnergyUnits::Ev;

  void validate_common() const {
    if (!(inertia > 0.0)) throw std::invalid_argument("retinal: inertia <= 0");
    if (n_theta < 3 || n_theta % 2 == 0)
      throw std::invalid_argument("retinal: n_theta must be odd and >= 3");
    if (d_modes < 2) throw std::invalid_argument("retinal: d_modes < 2");
    if (!(omega_c > 0.0))
      throw std::invalid_argument("retinal: Omega_c <= 0");
    for (const auto& [w, k] : bath)
      if (!(w > 0.0)) throw std::invalid_argument("retinal: bath frequency <= 0");
  }
};

struct RetinalModel {
  TermList terms;
  BasisChain bases;
  std::size_t n_bath_modes;
};

namespace detail {

inline double to_hartree(double x, EnergyUnits units) {
  return units == EnergyUnits::Ev ? ev_to_hartree(x) : x;
}

inline RetinalModel build_retinal(const RetinalParams& p,
                                  std::size_t n_bath) {
  p.validate_common();
  if (n_bath > p.bath.size())
    throw std::invalid_argument("retinal: not enough bath modes configured");
  const auto u = p.input_units;
  const double w0 = to_hartree(p.w0, u);
  const double w1 = to_hartree(p.w1, u);
  const double e1 = to_hartree(p.e1, u);
  const double wc = to_hartree(p.omega_c, u);
  const double kc = to_hartree(p.kappa_c, u);
  const double lam = to_hartree(p.lambda, u);

  RetinalModel model;
  model.n_bath_modes = n_bath;
  model.bases.push_back(SiteBasis::electronic());
  model.bases.push_back(SiteBasis::exp_dvr(p.n_theta, p.inertia));
  for (std::size_t j = 0; j <= n_bath; ++j)  // coupling mode + bath
    model.bases.push_back(SiteBasis::boson(p.d_modes));

  auto& t = model.terms;
  t.push_back(term(1.0, {{1, "dvr_kin"}}));  // acts on both diabatic states
  if (w0 != 0.0) t.push_back(term(w0 / 2.0, {{0, "proj0"}, {1, "dvr_one_minus_cos"}}));
  if (e1 != 0.0) t.push_back(term(e1, {{0, "proj1"}}));
  if (w1 != 0.0)
    t.push_back(term(-w1 / 2.0, {{0, "proj1"}, {1, "dvr_one_minus_cos"}}));
  t.push_back(term(wc, {{2, "n_plus_half"}}));
  if (kc != 0.0) t.push_back(term(kc, {{0, "proj1"}, {2, "x_dimless"}}));
  if (lam != 0.0) t.push_back(term(lam, {{0, "flip01"}, {2, "x_dimless"}}));
  for (std::size_t j = 0; j < n_bath; ++j) {
    const double wj = to_hartree(p.bath[j].first, u);
    const double kj = to_hartree(p.bath[j].second, u);
    t.push_back(term(wj, {{3 + j, "n_plus_half"}}));
    if (kj != 0.0) t.push_back(term(kj, {{0, "proj1"}, {3 + j, "x_dimless"}}));
  }
  return model;
}

}  // namespace detail

// Full two-state 25-mode model: torsion + coupling mode + 23 bath modes,
// 26 chain sites in total.
inline RetinalModel retinal_terms(const RetinalParams& p) {
  if (p.bath.size() != 23)
    throw std::invalid_argument(
        "retinal: bath must contain exactly 23 oscillators");
  return detail::build_retinal(p, 23);
}

// Desk-scale reduction keeping the first n_bath bath oscillators; used for
// oracle cross-checks where the full model is out of reach.
inline RetinalModel retinal_reduced_terms(const RetinalParams& p,
                                          std::size_t n_bath) {
  return detail::build_retinal(p, n_bath);
}

// Nuclear part of H0 (no electronic site): kinetic + ground-state torsional
// potential + harmonic modes. Site i here maps to site i+1 of the full chain.
inline RetinalModel retinal_nuclear_h0(const RetinalParams& p,
                                       std::size_t n_bath) {
  p.validate_common();
  if (n_bath > p.bath.size())
    throw std::invalid_argument("retinal: not enough bath modes configured");
  const auto u = p.input_units;
  RetinalModel model;
  model.n_bath_modes = n_bath;
  model.bases.push_back(SiteBasis::exp_dvr(p.n_theta, p.inertia));
  for (std::size_t j = 0; j <= n_bath; ++j)
    model.bases.push_back(SiteBasis::boson(p.d_modes));
  auto& t = model.terms;
  t.push_back(term(1.0, {{0, "dvr_kin"}}));
  const double w0 = detail::to_hartree(p.w0, u);
  if (w0 != 0.0) t.push_back(term(w0 / 2.0, {{0, "dvr_one_minus_cos"}}));
  t.push_back(term(detail::to_hartree(p.omega_c, u), {{1, "n_plus_half"}}));
  for (std::size_t j = 0; j < n_bath; ++j)
    t.push_back(
        term(detail::to_hartree(p.bath[j].first, u), {{2 + j, "n_plus_half"}}));
  return model;
}

// Franck-Condon initial state: vibrational ground state of H0 placed on the
// S1 diabatic surface. P_S1(0) = 1 by construction.
inline MatrixProductState retinal_initial_state(
    const RetinalParams& p, std::size_t n_bath,
    const DmrgSchedule& schedule = default_dmrg_schedule(10, 6, 1e-12)) {
  auto nuclear = retinal_nuclear_h0(p, n_bath);
  auto h = mpo_from_terms(nuclear.terms, nuclear.bases);
  auto init = MatrixProductState::random_state(nuclear.bases, 4, 11);
  auto res = dmrg_ground_state(h, init, schedule);
  if (!res.converged)
    throw std::runtime_error(
        "retinal_initial_state: nuclear DMRG did not converge");

  const auto full = detail::build_retinal(p, n_bath);
  std::vector<DenseTensor> tensors;
  DenseTensor e1({1, 2, 1});
  e1.at({0, 1, 0}) = 1.0;  // |1> = S1
  tensors.push_back(std::move(e1));
  auto nuc = res.state.canonicalized(0);
  for (std::size_t i = 0; i < nuc.size(); ++i) tensors.push_back(nuc.tensor(i));
  return MatrixProductState(full.bases, std::move(tensors), 1);
}

inline MatrixProductState retinal_initial_state(const RetinalParams& p) {
  if (p.bath.size() != 23)
    throw std::invalid_argument(
        "retinal: bath must contain exactly 23 oscillators");
  return retinal_initial_state(p, 23);
}

}  // namespace tnsim
