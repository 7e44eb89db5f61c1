#pragma once

// Lanczos iterations for Hermitian operators given as matrix-free applies:
// lowest eigenpair (ground-state searches) and exp(coeff*H)|v> (time steps).
// Full reorthogonalization throughout; the operators involved are small
// effective blocks or desk-scale Hamiltonians, so robustness beats memory.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tnsim/tensor.hpp"

namespace tnsim {

using ApplyFn = std::function<void(const VectorXc&, VectorXc&)>;

struct LanczosEigResult {
  double value = 0.0;
  VectorXc vector;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline void reorthogonalize(const std::vector<VectorXc>& basis, VectorXc& w) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) w -= q.dot(w) * q;
}

}  // namespace detail

// Lowest eigenpair of a Hermitian operator.
inline LanczosEigResult lanczos_ground(const ApplyFn& apply, const VectorXc& v0,
                                       std::size_t max_iters, double tol) {
  const double n0 = v0.norm();
  if (!(n0 > 0.0)) throw std::invalid_argument("lanczos_ground: zero start");
  const auto dim = static_cast<std::size_t>(v0.size());
  max_iters = std::min(max_iters, dim);

  std::vector<VectorXc> basis;
  std::vector<double> alpha, beta;  // beta[j] couples basis[j] and basis[j+1]
  basis.push_back(v0 / n0);
  VectorXc w(v0.size());

  LanczosEigResult res;
  Eigen::VectorXd ritz;
  Eigen::MatrixXd ritz_vecs;
  for (std::size_t j = 0; j < max_iters; ++j) {
    apply(basis[j], w);
    if (!w.allFinite())
      throw std::runtime_error("lanczos_ground: non-finite values from apply");
    const double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    detail::reorthogonalize(basis, w);

    // diagonalize current tridiagonal block
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    ritz = es.eigenvalues();
    ritz_vecs = es.eigenvectors();
    res.value = ritz[0];
    res.iterations = j + 1;

    const double b = w.norm();
    const double resid = b * std::abs(ritz_vecs(m - 1, 0));
    if (resid <= tol * std::max(1.0, std::abs(res.value)) || b <= 1e-14 ||
        j + 1 == max_iters || alpha.size() == dim) {
      res.converged = resid <= tol * std::max(1.0, std::abs(res.value)) ||
                      b <= 1e-14;
      res.vector = VectorXc::Zero(v0.size());
      for (Eigen::Index i = 0; i < m; ++i)
        res.vector += ritz_vecs(i, 0) * basis[i];
      res.vector.normalize();
      return res;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return res;  // unreachable
}

// w = exp(coeff * H) v for Hermitian H. The Krylov dimension grows until the
// Saad residual estimate drops below tol * |v| or max_dim is hit.
struct KrylovExpResult {
  VectorXc vector;
  std::size_t dimension = 0;
  bool converged = false;
  double error_estimate = 0.0;
};

inline KrylovExpResult krylov_expm(const ApplyFn& apply, const VectorXc& v,
                                   cplx coeff, std::size_t max_dim,
                                   double tol) {
  KrylovExpResult res;
  const double vnorm = v.norm();
  if (vnorm == 0.0) {
    res.vector = v;
    res.converged = true;
    return res;
  }
  const auto dim = static_cast<std::size_t>(v.size());
  max_dim = std::min(std::max<std::size_t>(2, max_dim), dim);

  std::vector<VectorXc> basis;
  std::vector<double> alpha, beta;
  basis.push_back(v / vnorm);
  VectorXc w(v.size());

  auto assemble = [&](Eigen::VectorXcd& y) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(m);
    for (Eigen::Index i = 0; i < m; ++i)
      phases[i] = std::exp(coeff * es.eigenvalues()[i]);
    y = es.eigenvectors().cast<cplx>() *
        (phases.array() * es.eigenvectors().row(0).transpose().cast<cplx>().array())
            .matrix();
  };

  Eigen::VectorXcd y;
  for (std::size_t j = 0; j < max_dim; ++j) {
    apply(basis[j], w);
    if (!w.allFinite())
      throw std::runtime_error("krylov_expm: non-finite values from apply");
    const double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    detail::reorthogonalize(basis, w);
    const double b = w.norm();

    assemble(y);
    const double err = b * std::abs(coeff) * std::abs(y[y.size() - 1]);
    res.dimension = j + 1;
    res.error_estimate = err;
    if (err <= tol || b <= 1e-14 || j + 1 == max_dim || alpha.size() == dim) {
      res.converged = err <= tol || b <= 1e-14 || alpha.size() == dim;
      res.vector = VectorXc::Zero(v.size());
      for (Eigen::Index i = 0; i < y.size(); ++i)
        res.vector += (vnorm * y[i]) * basis[i];
      return res;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return res;  // unreachable
}

}  // namespace tnsim
