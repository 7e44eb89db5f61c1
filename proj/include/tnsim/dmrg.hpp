#pragma once

// Two-site DMRG ground-state search. Each sweep entry fixes the truncation
// (max bond, cutoff) and an optional noise amplitude used to escape local
// minima; noise should decay to zero by the final entry so the variational
// bound holds at the end.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tnsim/envs.hpp"
#include "tnsim/krylov.hpp"
#include "tnsim/mpo.hpp"
#include "tnsim/mps.hpp"

namespace tnsim {

struct DmrgSweep {
  std::size_t max_bond = 16;
  double cutoff = 1e-10;
  double noise = 0.0;
};

struct DmrgSchedule {
  std::vector<DmrgSweep> sweeps;
  double energy_tol = 1e-8;
  std::size_t max_local_iters = 60;
  double local_tol = 1e-9;
  std::uint64_t seed = 1;

  void validate() const {
    if (sweeps.empty()) throw std::invalid_argument("schedule: no sweeps");
    if (!(energy_tol > 0.0) || !(local_tol > 0.0) || max_local_iters == 0)
      throw std::invalid_argument("schedule: tolerances must be positive");
    for (const auto& s : sweeps)
      if (s.max_bond < 1 || s.cutoff < 0.0 || s.noise < 0.0)
        throw std::invalid_argument("schedule: bad sweep entry");
  }
};

// Geometric ramp up to max_bond, noise fading to zero on the final entries.
inline DmrgSchedule default_dmrg_schedule(std::size_t max_bond,
                                          std::size_t n_sweeps = 8,
                                          double cutoff = 1e-10) {
  DmrgSchedule s;
  for (std::size_t k = 0; k < n_sweeps; ++k) {
    DmrgSweep sw;
    const double frac = n_sweeps > 1 ? double(k) / double(n_sweeps - 1) : 1.0;
    sw.max_bond = std::max<std::size_t>(
        2, static_cast<std::size_t>(
               std::lround(std::pow(double(max_bond), 0.5 + 0.5 * frac))));
    sw.max_bond = std::min(sw.max_bond, max_bond);
    if (k + 2 >= n_sweeps) sw.max_bond = max_bond;
    sw.cutoff = cutoff;
    sw.noise = k + 2 >= n_sweeps ? 0.0 : 1e-6 * std::pow(0.1, double(k));
    s.sweeps.push_back(sw);
  }
  return s;
}

struct DmrgResult {
  double energy;
  MatrixProductState state;
  std::vector<double> energy_per_sweep;
  bool converged;
  double max_discarded_weight;
};

inline DmrgResult dmrg_ground_state(const MatrixProductOperator& h,
                                    const MatrixProductState& init,
                                    const DmrgSchedule& schedule) {
  schedule.validate();
  const std::size_t n = init.size();
  if (h.size() != n)
    throw std::invalid_argument("dmrg: Hamiltonian/state size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!h.basis(i).same_kind(init.basis(i)))
      throw std::invalid_argument("dmrg: incompatible bases");
  if (n < 2) throw std::invalid_argument("dmrg: need at least 2 sites");
  if (!(init.norm() > 0.0)) throw std::invalid_argument("dmrg: zero init");

  MatrixProductState psi = init.canonicalized(0).normalized();
  std::mt19937_64 rng(schedule.seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  std::vector<DenseTensor> lenv(n + 1, env_boundary());
  std::vector<DenseTensor> renv(n + 1, env_boundary());
  for (std::size_t i = n; i-- > 1;)
    renv[i] = right_env_step(renv[i + 1], psi.tensor(i), h.tensor(i));

  auto local_solve = [&](std::size_t i, const DmrgSweep& sw) {
    DenseTensor block = contract(psi.tensor(i), {2}, psi.tensor(i + 1), {0});
    const auto shape = block.shape();  // (a, d1, d2, b)
    const std::size_t len = block.size();
    VectorXc v0(len);
    for (std::size_t k = 0; k < len; ++k) v0[k] = block[k];

    ApplyFn apply = [&](const VectorXc& in, VectorXc& out) {
      DenseTensor t(shape);
      for (std::size_t k = 0; k < len; ++k) t[k] = in[k];
      DenseTensor r =
          apply_two_site(lenv[i], h.tensor(i), h.tensor(i + 1), renv[i + 2], t);
      out.resize(static_cast<Eigen::Index>(len));
      for (std::size_t k = 0; k < len; ++k) out[k] = r[k];
    };
    auto eig = lanczos_ground(apply, v0, schedule.max_local_iters,
                              schedule.local_tol);
    if (!eig.vector.allFinite())
      throw std::runtime_error("dmrg: local eigensolver produced non-finite values");

    if (sw.noise > 0.0) {
      VectorXc g(len);
      for (std::size_t k = 0; k < len; ++k) g[k] = cplx{dist(rng), dist(rng)};
      g.normalize();
      eig.vector += sw.noise * g;
      eig.vector.normalize();
    }
    DenseTensor t(shape);
    for (std::size_t k = 0; k < len; ++k) t[k] = eig.vector[k];
    return t;
  };

  auto split = [&](std::size_t i, DenseTensor block, const DmrgSweep& sw,
                   bool move_right, double& max_discarded) {
    const auto s = block.shape();
    auto svd = svd_truncate(block.reshaped({s[0] * s[1], s[2] * s[3]}),
                            sw.max_bond, sw.cutoff);
    max_discarded = std::max(max_discarded, svd.report.discarded_weight);
    const std::size_t k = svd.report.kept;
    DenseTensor sv = svd.v;  // (k, d2*b)
    DenseTensor us = svd.u;  // (a*d1, k)
    if (move_right) {
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < s[2] * s[3]; ++c)
          sv.at({r, c}) *= svd.s[r];
      psi.tensor(i) = us.reshaped({s[0], s[1], k});
      DenseTensor center = sv.reshaped({k, s[2], s[3]});
      const double nrm = center.frobenius_norm();
      if (nrm > 0.0) center *= cplx{1.0 / nrm, 0.0};
      psi.tensor(i + 1) = std::move(center);
    } else {
      for (std::size_t r = 0; r < s[0] * s[1]; ++r)
        for (std::size_t c = 0; c < k; ++c)
          us.at({r, c}) *= svd.s[c];
      psi.tensor(i + 1) = sv.reshaped({k, s[2], s[3]});
      DenseTensor center = us.reshaped({s[0], s[1], k});
      const double nrm = center.frobenius_norm();
      if (nrm > 0.0) center *= cplx{1.0 / nrm, 0.0};
      psi.tensor(i) = std::move(center);
    }
  };

  std::vector<double> energy_per_sweep;
  energy_per_sweep.reserve(schedule.sweeps.size());
  double final_sweep_discarded = 0.0;

  for (std::size_t sweep_idx = 0; sweep_idx < schedule.sweeps.size();
       ++sweep_idx) {
    const DmrgSweep& sw = schedule.sweeps[sweep_idx];
    double discarded = 0.0;
    // left-to-right
    for (std::size_t i = 0; i + 1 < n; ++i) {
      DenseTensor opt = local_solve(i, sw);
      split(i, std::move(opt), sw, /*move_right=*/true, discarded);
      lenv[i + 1] = left_env_step(lenv[i], psi.tensor(i), h.tensor(i));
    }
    // right-to-left
    for (std::size_t i = n - 1; i-- > 0;) {
      DenseTensor opt = local_solve(i, sw);
      split(i, std::move(opt), sw, /*move_right=*/false, discarded);
      renv[i + 1] = right_env_step(renv[i + 2], psi.tensor(i + 1),
                                   h.tensor(i + 1));
    }
    energy_per_sweep.push_back(expectation(psi, h).real());
    final_sweep_discarded = discarded;
  }

  const std::size_t ns = energy_per_sweep.size();
  const bool converged =
      ns >= 2 && std::abs(energy_per_sweep[ns - 1] - energy_per_sweep[ns - 2]) <
                     schedule.energy_tol;
  MatrixProductState state = psi.canonicalized(0).normalized();
  const double energy = expectation(state, h).real();
  return DmrgResult{energy, std::move(state), std::move(energy_per_sweep),
                    converged, final_sweep_discarded};
}

}  // namespace tnsim
