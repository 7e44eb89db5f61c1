#pragma once

// Brute-force reference solvers on the full Hilbert space: matrix-free
// Hamiltonian action assembled from the same ProductTerm lists the MPO
// compiler consumes, Lanczos ground states, and Krylov time propagation.
// Everything here is the oracle side of a dual-route check; it must stay
// independent of the MPS/MPO sweep machinery.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnsim/basis.hpp"
#include "tnsim/krylov.hpp"
#include "tnsim/terms.hpp"
#include "tnsim/trajectory.hpp"

namespace tnsim {

// Matrix-free action of a term list on dense vectors indexed site-major
// (site 0 slowest, matching mps_to_dense).
class DenseTermAction {
 public:
  DenseTermAction(TermList terms, BasisChain bases,
                  std::size_t max_dimension = (std::size_t{1} << 20))
      : bases_(std::move(bases)) {
    validate_terms(terms, bases_);
    terms_ = merge_terms(std::move(terms));
    dim_ = chain_dimension(bases_);
    if (dim_ > max_dimension)
      throw std::invalid_argument(
          "DenseTermAction: Hilbert dimension exceeds cap");
    strides_.assign(bases_.size(), 1);
    for (std::size_t i = bases_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * bases_[i].dim();
  }

  std::size_t dimension() const { return dim_; }
  const BasisChain& bases() const { return bases_; }
  const TermList& terms() const { return terms_; }

  // out = H * in
  void apply(const VectorXc& in, VectorXc& out) const {
    out.setZero(static_cast<Eigen::Index>(dim_));
    accumulate(in, out);
  }

  // out += H * in
  void accumulate(const VectorXc& in, VectorXc& out) const {
    VectorXc tmp, tmp2;
    for (const auto& t : terms_) {
      tmp = in;
      for (const auto& [site, name] : t.factors)
        apply_site_op(bases_[site].op(name), site, tmp, tmp2);
      out += t.coefficient * tmp;
    }
  }

  cplx expectation(const VectorXc& v) const {
    VectorXc hv(v.size());
    apply(v, hv);
    return v.dot(hv);
  }

  // Upper bound on ||H||_2 from coefficients and factor norms.
  double norm_bound() const {
    double bound = 0.0;
    for (const auto& t : terms_) {
      double prod = std::abs(t.coefficient);
      for (const auto& [site, name] : t.factors)
        prod *= bases_[site].op(name).operatorNorm();
      bound += prod;
    }
    return bound;
  }

 private:
  void apply_site_op(const MatrixXc& m, std::size_t site, VectorXc& v,
                     VectorXc& scratch) const {
    const std::size_t d = bases_[site].dim();
    const std::size_t stride = strides_[site];
    const std::size_t block = d * stride;
    scratch.resize(v.size());
    VectorXc x(d), y(d);
    for (std::size_t hi = 0; hi < dim_ / block; ++hi) {
      const std::size_t base = hi * block;
      for (std::size_t lo = 0; lo < stride; ++lo) {
        for (std::size_t k = 0; k < d; ++k) x[k] = v[base + lo + k * stride];
        y.noalias() = m * x;
        for (std::size_t k = 0; k < d; ++k)
          scratch[base + lo + k * stride] = y[k];
      }
    }
    v.swap(scratch);
  }

  BasisChain bases_;
  TermList terms_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> strides_;
};

struct EdGroundResult {
  double energy = 0.0;
  VectorXc vector;
  double residual = 0.0;
  bool converged = false;
};

struct EdOptions {
  std::size_t max_iters = 250;   // per Lanczos pass
  std::size_t restarts = 4;
  double tol = 1e-10;
  std::uint64_t seed = 7;
};

inline EdGroundResult ed_ground(const TermList& terms, const BasisChain& bases,
                                const EdOptions& opts = {}) {
  DenseTermAction h(terms, bases);
  const std::size_t dim = h.dimension();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorXc v0(dim);
  for (std::size_t i = 0; i < dim; ++i) v0[i] = cplx{dist(rng), dist(rng)};

  ApplyFn apply = [&h](const VectorXc& in, VectorXc& out) { h.apply(in, out); };
  LanczosEigResult res;
  VectorXc start = v0;
  for (std::size_t pass = 0; pass <= opts.restarts; ++pass) {
    res = lanczos_ground(apply, start, opts.max_iters, opts.tol);
    if (res.converged) break;
    start = res.vector;
  }

  EdGroundResult out;
  out.energy = res.value;
  out.vector = res.vector;
  VectorXc hv(dim);
  h.apply(out.vector, hv);
  out.energy = out.vector.dot(hv).real();
  out.residual = (hv - out.energy * out.vector).norm();
  out.converged = out.residual <= 1e-9 * std::max(1.0, h.norm_bound());
  return out;
}

using NamedTermLists = std::vector<std::pair<std::string, TermList>>;

// Krylov propagation under exp(-i H dt) with per-step error control.
inline Trajectory exact_propagate(const TermList& terms,
                                  const BasisChain& bases, VectorXc psi,
                                  double dt, std::size_t n_steps,
                                  const NamedTermLists& observables,
                                  std::size_t krylov_dim = 60,
                                  double krylov_tol = 1e-10) {
  DenseTermAction h(terms, bases, std::size_t{1} << 18);
  if (static_cast<std::size_t>(psi.size()) != h.dimension())
    throw std::invalid_argument("exact_propagate: state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("exact_propagate: state not normalized");

  std::vector<std::pair<std::string, DenseTermAction>> obs;
  obs.reserve(observables.size());
  for (const auto& [name, tl] : observables)
    obs.emplace_back(name, DenseTermAction(tl, bases, std::size_t{1} << 18));

  Trajectory traj;
  for (const auto& [name, a] : obs) traj.observables.emplace_back(name, std::vector<double>{});

  ApplyFn apply = [&h](const VectorXc& in, VectorXc& out) { h.apply(in, out); };
  auto sample = [&](double t) {
    traj.times.push_back(t);
    traj.norms.push_back(psi.norm());
    traj.energies.push_back(h.expectation(psi).real());
    for (std::size_t k = 0; k < obs.size(); ++k)
      traj.observables[k].second.push_back(
          obs[k].second.expectation(psi).real());
    traj.bond_profile.push_back(0);
  };

  sample(0.0);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    auto r = krylov_expm(apply, psi, cplx{0.0, -dt}, krylov_dim, krylov_tol);
    if (!r.converged)
      throw std::runtime_error("exact_propagate: Krylov step " +
                               std::to_string(step) + " did not converge");
    psi = std::move(r.vector);
    sample(dt * double(step));
  }
  return traj;
}

}  // namespace tnsim
