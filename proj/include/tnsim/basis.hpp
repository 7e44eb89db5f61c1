#pragma once

// Local site bases and their named operators. A basis owns an immutable
// registry of d x d matrices; Hamiltonian terms refer to operators by name.

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnsim/tensor.hpp"

namespace tnsim {

enum class BasisKind { SpinHalf, Boson, ExpDvr, Electronic };

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::SpinHalf: return "spin_half";
    case BasisKind::Boson: return "boson";
    case BasisKind::ExpDvr: return "exp_dvr";
    case BasisKind::Electronic: return "electronic";
  }
  return "?";
}

struct LocalOp {
  std::string name;
  MatrixXc matrix;
};

class SiteBasis {
 public:
  BasisKind kind() const { return impl_->kind; }
  std::size_t dim() const { return impl_->dim; }

  bool has_op(const std::string& name) const {
    return impl_->ops.count(name) > 0;
  }

  const MatrixXc& op(const std::string& name) const {
    auto it = impl_->ops.find(name);
    if (it == impl_->ops.end())
      throw std::invalid_argument("unknown operator '" + name + "' on basis " +
                                  to_string(impl_->kind));
    return it->second;
  }

  // New basis sharing this one's registry plus one extra named operator.
  SiteBasis with_op(const std::string& name, MatrixXc m) const {
    if (m.rows() != static_cast<Eigen::Index>(dim()) ||
        m.cols() != static_cast<Eigen::Index>(dim()))
      throw std::invalid_argument("with_op: matrix dimension mismatch");
    auto impl = std::make_shared<Impl>(*impl_);
    impl->ops[name] = std::move(m);
    return SiteBasis(std::move(impl));
  }

  // DVR grid points; empty for non-DVR bases.
  const std::vector<double>& grid() const { return impl_->grid; }

  bool same_kind(const SiteBasis& other) const {
    return impl_->kind == other.impl_->kind && impl_->dim == other.impl_->dim;
  }

  static SiteBasis spin_half() {
    auto impl = std::make_shared<Impl>();
    impl->kind = BasisKind::SpinHalf;
    impl->dim = 2;
    MatrixXc sx(2, 2), sy(2, 2), sz(2, 2), sp(2, 2), sm(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    sz << 1, 0, 0, -1;
    sp << 0, 1, 0, 0;
    sm << 0, 0, 1, 0;
    impl->ops = {{"id", MatrixXc::Identity(2, 2)}, {"sx", sx}, {"sy", sy},
                 {"sz", sz},                       {"sp", sp}, {"sm", sm}};
    return SiteBasis(std::move(impl));
  }

  // Truncated harmonic ladder; b drops the amplitude out of the top level
  // (no wraparound).
  static SiteBasis boson(std::size_t levels) {
    if (levels < 2) throw std::invalid_argument("boson: levels < 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = BasisKind::Boson;
    impl->dim = levels;
    const auto d = static_cast<Eigen::Index>(levels);
    MatrixXc b = MatrixXc::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) b(n - 1, n) = std::sqrt(double(n));
    MatrixXc bdag = b.adjoint();
    MatrixXc num = bdag * b;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    MatrixXc x = (bdag + b) * inv_sqrt2;
    MatrixXc p = cplx(0, 1) * (bdag - b) * inv_sqrt2;
    MatrixXc n_half = num + 0.5 * MatrixXc::Identity(d, d);
    impl->ops = {{"id", MatrixXc::Identity(d, d)},
                 {"b", b},
                 {"bdag", bdag},
                 {"n", num},
                 {"n_plus_half", n_half},
                 {"b_plus_bdag", bdag + b},
                 {"x_dimless", x},
                 {"p_dimless", p}};
    return SiteBasis(std::move(impl));
  }

  static SiteBasis electronic() {
    auto impl = std::make_shared<Impl>();
    impl->kind = BasisKind::Electronic;
    impl->dim = 2;
    MatrixXc p0 = MatrixXc::Zero(2, 2), p1 = MatrixXc::Zero(2, 2),
             flip = MatrixXc::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    flip(0, 1) = 1.0;
    flip(1, 0) = 1.0;
    impl->ops = {{"id", MatrixXc::Identity(2, 2)},
                 {"proj0", p0},
                 {"proj1", p1},
                 {"flip01", flip}};
    return SiteBasis(std::move(impl));
  }

  // Periodic coordinate on theta_j = 2*pi*j/N. The kinetic matrix is the
  // exact image of diag(k^2/2I) in the plane-wave basis exp(i k theta),
  // k = -(N-1)/2 .. (N-1)/2.
  static SiteBasis exp_dvr(std::size_t n_points, double inertia) {
    if (n_points < 3 || n_points % 2 == 0)
      throw std::invalid_argument("exp_dvr: n_points must be odd and >= 3");
    if (!(inertia > 0.0)) throw std::invalid_argument("exp_dvr: inertia <= 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = BasisKind::ExpDvr;
    impl->dim = n_points;
    const auto n = static_cast<Eigen::Index>(n_points);
    const double two_pi = 2.0 * std::numbers::pi;
    impl->grid.resize(n_points);
    for (std::size_t j = 0; j < n_points; ++j)
      impl->grid[j] = two_pi * double(j) / double(n_points);

    const int kmax = (int(n_points) - 1) / 2;
    MatrixXc kin = MatrixXc::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        double acc = 0.0;
        const double dtheta = impl->grid[j] - impl->grid[l];
        for (int k = -kmax; k <= kmax; ++k)
          acc += (double(k) * double(k)) * std::cos(double(k) * dtheta);
        kin(j, l) = acc / (2.0 * inertia * double(n_points));
      }
    }
    // symmetrize away roundoff
    kin = ((kin + kin.adjoint()) * 0.5).eval();

    MatrixXc cosm = MatrixXc::Zero(n, n), omc = MatrixXc::Zero(n, n),
             trans = MatrixXc::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double c = std::cos(impl->grid[j]);
      cosm(j, j) = c;
      omc(j, j) = 1.0 - c;
      trans(j, j) = c < 0.0 ? 1.0 : 0.0;
    }
    impl->ops = {{"id", MatrixXc::Identity(n, n)},
                 {"dvr_kin", kin},
                 {"dvr_cos", cosm},
                 {"dvr_one_minus_cos", omc},
                 {"dvr_trans_proj", trans}};
    return SiteBasis(std::move(impl));
  }

  // Diagonal potential sampled on this basis's grid.
  template <typename F>
  MatrixXc dvr_potential(F&& f) const {
    if (impl_->kind != BasisKind::ExpDvr)
      throw std::invalid_argument("dvr_potential: not a DVR basis");
    const auto n = static_cast<Eigen::Index>(dim());
    MatrixXc v = MatrixXc::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) v(j, j) = f(impl_->grid[j]);
    return v;
  }

 private:
  struct Impl {
    BasisKind kind{};
    std::size_t dim = 0;
    std::map<std::string, MatrixXc> ops;
    std::vector<double> grid;
  };

  explicit SiteBasis(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

using BasisChain = std::vector<SiteBasis>;

inline std::size_t chain_dimension(const BasisChain& bases) {
  std::size_t d = 1;
  for (const auto& b : bases) {
    if (d > (std::size_t{1} << 62) / b.dim())
      throw std::overflow_error("chain_dimension: overflow");
    d *= b.dim();
  }
  return d;
}

}  // namespace tnsim
