#pragma once

// Bond expansion ahead of one-site TDVP. Enlarges every bond to
// min(target, geometric cap) while spanning the input state exactly: each
// site tensor keeps its orthonormalized columns and gains extra orthonormal
// directions harvested from the MPO-applied state (the directions a two-site
// update would explore); the enlarged entries of the propagated center are
// zero, so the state vector is unchanged. Plain zero-padding of bonds is
// deliberately not used - it would not move the tangent space. When the
// Hamiltonian cannot supply enough independent directions (decoupled or
// degenerate cases), the remainder is completed with seeded random
// orthonormal vectors, which are as good as any other unexplored direction.

#include <cstdint>
#include <random>

#include "tnsim/envs.hpp"
#include "tnsim/mpo.hpp"
#include "tnsim/mps.hpp"

namespace tnsim {

inline MatrixProductState expand_bond(const MatrixProductState& psi,
                                      const MatrixProductOperator& h,
                                      std::size_t target_bond,
                                      std::uint64_t seed = 0x517cc1b727220a95ULL) {
  if (target_bond < 1) throw std::invalid_argument("expand_bond: target < 1");
  if (h.size() != psi.size())
    throw std::invalid_argument("expand_bond: size mismatch");
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (!h.basis(i).same_kind(psi.basis(i)))
      throw std::invalid_argument("expand_bond: basis mismatch");
  if (target_bond < psi.max_bond_dim()) return psi;  // no-op by contract

  const std::size_t n = psi.size();
  const auto caps = MatrixProductState::bond_caps(psi.bases());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  MatrixProductState cur = psi.canonicalized(0).normalized();
  // Pass 1..2 harvest H-applied directions only; the final pass fills any
  // remaining deficit with random orthonormal completions.
  for (int pass = 0; pass < 3; ++pass) {
    const bool fill_random = pass == 2;
    bool saturated = true;
    for (std::size_t cut = 1; cut < n; ++cut)
      if (cur.bond_dims()[cut] < std::min(target_bond, caps[cut]))
        saturated = false;
    if (saturated) break;

    std::vector<DenseTensor> tensors;
    tensors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) tensors.push_back(cur.tensor(i));

    DenseTensor lenv = env_boundary();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const DenseTensor& m = tensors[i];
      const std::size_t al = m.extent(0), d = m.extent(1), ar = m.extent(2);
      auto qr = qr_orthonormalize(m.reshaped({al * d, ar}), QrSide::Left);
      const std::size_t k0 = qr.factor.extent(1);
      const std::size_t cap = std::min(target_bond, caps[i + 1]);
      MatrixXc cols = qr.factor.as_matrix();

      if (k0 < cap) {
        // candidate directions: left block of H|psi> at this cut
        DenseTensor t1 = contract(lenv, {2}, m, {0});  // (bra, w, in, ar)
        DenseTensor t2 =
            contract(t1, {1, 2}, h.tensor(i), {0, 2});  // (bra, ar, out, wr)
        DenseTensor p = t2.permuted({0, 2, 3, 1})
                            .reshaped({al * d, t2.extent(3) * ar});
        MatrixXc pm = p.as_matrix();
        pm -= cols * (cols.adjoint() * pm).eval();
        Eigen::JacobiSVD<MatrixXc> svd(pm, Eigen::ComputeThinU);
        MatrixXc grown(al * d, cap);
        grown.leftCols(k0) = cols;
        std::size_t have = k0;
        const double floor_sv =
            1e-12 * std::max(1.0, svd.singularValues().size() > 0
                                      ? svd.singularValues()[0]
                                      : 0.0);
        for (Eigen::Index c = 0;
             c < svd.matrixU().cols() && have < cap; ++c) {
          if (svd.singularValues()[c] <= floor_sv) break;
          grown.col(have++) = svd.matrixU().col(c);
        }
        while (fill_random && have < cap) {
          VectorXc g(al * d);
          for (Eigen::Index ii = 0; ii < g.size(); ++ii)
            g[ii] = cplx{dist(rng), dist(rng)};
          g -= grown.leftCols(have) * (grown.leftCols(have).adjoint() * g).eval();
          g -= grown.leftCols(have) * (grown.leftCols(have).adjoint() * g).eval();
          const double nrm = g.norm();
          if (nrm < 1e-8) continue;  // rare collision, draw again
          grown.col(have++) = g / nrm;
        }
        cols = grown.leftCols(have);
      }

      const std::size_t k = static_cast<std::size_t>(cols.cols());
      tensors[i] = DenseTensor::from_matrix(cols).reshaped({al, d, k});
      // propagate the remainder; new directions carry zero state weight
      DenseTensor next =
          contract(qr.remainder, {1}, tensors[i + 1], {0});  // (k0, d', a')
      DenseTensor padded({k, next.extent(1), next.extent(2)});
      for (std::size_t r = 0; r < k0; ++r)
        for (std::size_t s = 0; s < next.extent(1); ++s)
          for (std::size_t c = 0; c < next.extent(2); ++c)
            padded.at({r, s, c}) = next.at({r, s, c});
      tensors[i + 1] = std::move(padded);
      lenv = left_env_step(lenv, tensors[i], h.tensor(i));
    }
    cur = MatrixProductState(cur.bases(), std::move(tensors), n - 1)
              .canonicalized(0);
  }
  return cur.normalized();
}

}  // namespace tnsim
