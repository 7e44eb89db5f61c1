#pragma once

// Time evolution by the projector-splitting TDVP integrator: a symmetric
// left-to-right / right-to-left sweep of half steps, second order in dt.
// Site tensors evolve forward under one-site (or two-site) effective
// Hamiltonians; bond/center tensors evolve backward, which realizes the
// tangent-space projection. One-site sweeps keep bond dimensions, norm and
// energy fixed; two-site sweeps grow bonds up to max_bond with truncation.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnsim/envs.hpp"
#include "tnsim/expand.hpp"
#include "tnsim/krylov.hpp"
#include "tnsim/mpo.hpp"
#include "tnsim/mps.hpp"
#include "tnsim/terms.hpp"
#include "tnsim/trajectory.hpp"

namespace tnsim {

enum class TdvpScheme { OneSite, TwoSite, Hybrid };

struct TdvpConfig {
  double dt = 0.01;
  std::size_t n_steps = 100;
  TdvpScheme scheme = TdvpScheme::Hybrid;
  // hybrid: switch to one-site once bonds saturate or this step is reached
  std::size_t switch_step = std::numeric_limits<std::size_t>::max();
  std::size_t max_bond = 16;
  double cutoff = 1e-12;
  std::size_t krylov_dim = 30;
  double krylov_tol = 1e-12;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("tdvp: dt must be > 0");
    if (max_bond < 1) throw std::invalid_argument("tdvp: max_bond < 1");
    if (krylov_dim < 2) throw std::invalid_argument("tdvp: krylov_dim < 2");
    if (!(krylov_tol > 0.0) || !(cutoff >= 0.0))
      throw std::invalid_argument("tdvp: bad tolerances");
  }
};

namespace detail {

class TdvpSweeper {
 public:
  TdvpSweeper(const MatrixProductOperator& h, MatrixProductState psi,
              const TdvpConfig& cfg)
      : h_(h), psi_(std::move(psi)), cfg_(cfg), n_(psi_.size()) {
    psi_ = psi_.canonicalized(0).normalized();
    lenv_.assign(n_ + 1, env_boundary());
    renv_.assign(n_ + 1, env_boundary());
    for (std::size_t i = n_; i-- > 1;)
      renv_[i] = right_env_step(renv_[i + 1], psi_.tensor(i), h_.tensor(i));
  }

  const MatrixProductState& state() const { return psi_; }

  double last_step_discarded() const { return last_discarded_; }

  void step_one_site(double dt) {
    // left-to-right half step
    for (std::size_t i = 0; i < n_; ++i) {
      evolve_site(i, -0.5 * dt);
      if (i + 1 < n_) {
        auto qr = split_left(i);
        lenv_[i + 1] = left_env_step(lenv_[i], psi_.tensor(i), h_.tensor(i));
        evolve_bond(qr, i + 1, +0.5 * dt);
        psi_.tensor(i + 1) = contract(qr, {1}, psi_.tensor(i + 1), {0});
      }
    }
    // right-to-left half step
    for (std::size_t i = n_; i-- > 0;) {
      evolve_site(i, -0.5 * dt);
      if (i > 0) {
        auto lq = split_right(i);
        renv_[i] = right_env_step(renv_[i + 1], psi_.tensor(i), h_.tensor(i));
        evolve_bond_right(lq, i, +0.5 * dt);
        psi_.tensor(i - 1) = contract(psi_.tensor(i - 1), {2}, lq, {0});
      }
    }
  }

  void step_two_site(double dt) {
    last_discarded_ = 0.0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      evolve_pair(i, -0.5 * dt, /*move_right=*/true);
      lenv_[i + 1] = left_env_step(lenv_[i], psi_.tensor(i), h_.tensor(i));
      if (i + 2 < n_) evolve_site(i + 1, +0.5 * dt);
    }
    for (std::size_t i = n_ - 1; i-- > 0;) {
      evolve_pair(i, -0.5 * dt, /*move_right=*/false);
      renv_[i + 1] =
          right_env_step(renv_[i + 2], psi_.tensor(i + 1), h_.tensor(i + 1));
      if (i > 0) evolve_site(i, +0.5 * dt);
    }
  }

 private:
  VectorXc flatten(const DenseTensor& t) const {
    VectorXc v(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) v[k] = t[k];
    return v;
  }

  DenseTensor unflatten(const VectorXc& v,
                        const std::vector<std::size_t>& shape) const {
    DenseTensor t(shape);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = v[k];
    return t;
  }

  VectorXc krylov_step(const ApplyFn& apply, const VectorXc& v, double dt_eff,
                       const char* what) {
    auto r = krylov_expm(apply, v, cplx{0.0, -dt_eff}, cfg_.krylov_dim,
                         cfg_.krylov_tol * v.norm());
    if (!r.converged)
      throw std::runtime_error(std::string("tdvp: Krylov ") + what +
                               " did not converge at step " +
                               std::to_string(current_step_));
    return std::move(r.vector);
  }

  void evolve_site(std::size_t i, double dt_eff) {
    const auto shape = psi_.tensor(i).shape();
    ApplyFn apply = [&](const VectorXc& in, VectorXc& out) {
      DenseTensor r = apply_one_site(lenv_[i], h_.tensor(i), renv_[i + 1],
                                     unflatten(in, shape));
      out = flatten(r);
    };
    psi_.tensor(i) =
        unflatten(krylov_step(apply, flatten(psi_.tensor(i)), dt_eff, "site"),
                  shape);
  }

  // QR split of site i; returns the bond remainder, leaves site left-iso
  DenseTensor split_left(std::size_t i) {
    const auto& t = psi_.tensor(i);
    const std::size_t a = t.extent(0), d = t.extent(1), b = t.extent(2);
    auto qr = qr_orthonormalize(t.reshaped({a * d, b}), QrSide::Left);
    psi_.tensor(i) = qr.factor.reshaped({a, d, qr.factor.extent(1)});
    return qr.remainder;  // (k, b)
  }

  DenseTensor split_right(std::size_t i) {
    const auto& t = psi_.tensor(i);
    const std::size_t a = t.extent(0), d = t.extent(1), b = t.extent(2);
    auto qr = qr_orthonormalize(t.reshaped({a, d * b}), QrSide::Right);
    psi_.tensor(i) = qr.factor.reshaped({qr.factor.extent(0), d, b});
    return qr.remainder;  // (a, k)
  }

  void evolve_bond(DenseTensor& c, std::size_t env_site, double dt_eff) {
    const auto shape = c.shape();
    ApplyFn apply = [&](const VectorXc& in, VectorXc& out) {
      DenseTensor r = apply_zero_site(lenv_[env_site], renv_[env_site],
                                      unflatten(in, shape));
      out = flatten(r);
    };
    c = unflatten(krylov_step(apply, flatten(c), dt_eff, "bond"), shape);
  }

  void evolve_bond_right(DenseTensor& c, std::size_t site, double dt_eff) {
    const auto shape = c.shape();
    ApplyFn apply = [&](const VectorXc& in, VectorXc& out) {
      DenseTensor r =
          apply_zero_site(lenv_[site], renv_[site], unflatten(in, shape));
      out = flatten(r);
    };
    c = unflatten(krylov_step(apply, flatten(c), dt_eff, "bond"), shape);
  }

  void evolve_pair(std::size_t i, double dt_eff, bool move_right) {
    DenseTensor block = contract(psi_.tensor(i), {2}, psi_.tensor(i + 1), {0});
    const auto shape = block.shape();
    ApplyFn apply = [&](const VectorXc& in, VectorXc& out) {
      DenseTensor r = apply_two_site(lenv_[i], h_.tensor(i), h_.tensor(i + 1),
                                     renv_[i + 2], unflatten(in, shape));
      out = flatten(r);
    };
    block =
        unflatten(krylov_step(apply, flatten(block), dt_eff, "pair"), shape);

    auto svd = svd_truncate(block.reshaped({shape[0] * shape[1],
                                            shape[2] * shape[3]}),
                            cfg_.max_bond, cfg_.cutoff);
    last_discarded_ = std::max(last_discarded_, svd.report.discarded_weight);
    const std::size_t k = svd.report.kept;
    DenseTensor us = svd.u, sv = svd.v;
    if (move_right) {
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < shape[2] * shape[3]; ++c)
          sv.at({r, c}) *= svd.s[r];
      psi_.tensor(i) = us.reshaped({shape[0], shape[1], k});
      DenseTensor center = sv.reshaped({k, shape[2], shape[3]});
      renormalize(center);
      psi_.tensor(i + 1) = std::move(center);
    } else {
      for (std::size_t r = 0; r < shape[0] * shape[1]; ++r)
        for (std::size_t c = 0; c < k; ++c) us.at({r, c}) *= svd.s[c];
      psi_.tensor(i + 1) = sv.reshaped({k, shape[2], shape[3]});
      DenseTensor center = us.reshaped({shape[0], shape[1], k});
      renormalize(center);
      psi_.tensor(i) = std::move(center);
    }
  }

  // two-site truncation loses a little norm; restore it so long runs stay
  // normalized (the loss itself is reported via discarded weight)
  static void renormalize(DenseTensor& center) {
    const double nrm = center.frobenius_norm();
    if (nrm > 0.0) center *= cplx{1.0 / nrm, 0.0};
  }

 public:
  std::size_t current_step_ = 0;

 private:
  const MatrixProductOperator& h_;
  MatrixProductState psi_;
  TdvpConfig cfg_;
  std::size_t n_;
  std::vector<DenseTensor> lenv_, renv_;
  double last_discarded_ = 0.0;
};

}  // namespace detail

inline Trajectory tdvp_evolve(const MatrixProductOperator& h,
                              const MatrixProductState& psi0,
                              const TdvpConfig& cfg,
                              const NamedTermLists& observables) {
  cfg.validate();
  if (h.size() != psi0.size())
    throw std::invalid_argument("tdvp: Hamiltonian/state size mismatch");
  for (std::size_t i = 0; i < psi0.size(); ++i)
    if (!h.basis(i).same_kind(psi0.basis(i)))
      throw std::invalid_argument("tdvp: incompatible bases");

  if (cfg.scheme == TdvpScheme::OneSite) {
    const auto caps = MatrixProductState::bond_caps(psi0.bases());
    const auto dims = psi0.bond_dims();
    for (std::size_t cut = 1; cut < psi0.size(); ++cut) {
      if (dims[cut] != std::min(cfg.max_bond, caps[cut]))
        throw std::invalid_argument(
            "tdvp one-site: bond " + std::to_string(cut) + " is " +
            std::to_string(dims[cut]) + ", expected min(max_bond, cap) = " +
            std::to_string(std::min(cfg.max_bond, caps[cut])) +
            "; call expand_bond on the initial state first");
    }
  }

  std::vector<std::pair<std::string, MatrixProductOperator>> obs;
  obs.reserve(observables.size());
  for (const auto& [name, tl] : observables)
    obs.emplace_back(name, mpo_from_terms(tl, psi0.bases()));

  detail::TdvpSweeper sweeper(h, psi0, cfg);

  Trajectory traj;
  for (const auto& [name, op] : obs)
    traj.observables.emplace_back(name, std::vector<double>{});

  auto sample = [&](double t) {
    const MatrixProductState& psi = sweeper.state();
    const double norm2 = overlap(psi, psi).real();
    traj.times.push_back(t);
    traj.norms.push_back(std::sqrt(norm2));
    traj.energies.push_back(expectation(psi, h).real() / norm2);
    for (std::size_t k = 0; k < obs.size(); ++k)
      traj.observables[k].second.push_back(
          expectation(psi, obs[k].second).real() / norm2);
    traj.bond_profile.push_back(psi.max_bond_dim());
  };

  const auto caps = MatrixProductState::bond_caps(psi0.bases());
  auto saturated = [&]() {
    const auto dims = sweeper.state().bond_dims();
    for (std::size_t cut = 1; cut < psi0.size(); ++cut)
      if (dims[cut] < std::min(cfg.max_bond, caps[cut])) return false;
    return true;
  };

  bool one_site_phase = cfg.scheme == TdvpScheme::OneSite;
  sample(0.0);
  for (std::size_t step = 1; step <= cfg.n_steps; ++step) {
    sweeper.current_step_ = step;
    if (cfg.scheme == TdvpScheme::Hybrid && !one_site_phase &&
        (step > cfg.switch_step || saturated()))
      one_site_phase = true;
    if (one_site_phase)
      sweeper.step_one_site(cfg.dt);
    else
      sweeper.step_two_site(cfg.dt);
    sample(cfg.dt * double(step));
  }
  return traj;
}

}  // namespace tnsim
