#pragma once

// Matrix product states over an ordered chain of site bases. Site tensors
// are rank-3 with index order (left bond, physical, right bond); the
// canonical center, when set, means every tensor strictly left of it is a
// left isometry and every tensor strictly right of it a right isometry.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "tnsim/basis.hpp"
#include "tnsim/tensor.hpp"

namespace tnsim {

class MatrixProductState {
 public:
  MatrixProductState(BasisChain bases, std::vector<DenseTensor> tensors,
                     std::optional<std::size_t> center)
      : bases_(std::move(bases)),
        tensors_(std::move(tensors)),
        center_(center) {
    check_consistency();
  }

  static MatrixProductState product_state(
      BasisChain bases, const std::vector<VectorXc>& local_states) {
    if (bases.empty()) throw std::invalid_argument("empty basis chain");
    if (local_states.size() != bases.size())
      throw std::invalid_argument("product_state: one local state per site");
    std::vector<DenseTensor> tensors;
    tensors.reserve(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const auto& v = local_states[i];
      if (v.size() != static_cast<Eigen::Index>(bases[i].dim()))
        throw std::invalid_argument("product_state: local state dimension");
      if (std::abs(v.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("product_state: local state not normalized");
      DenseTensor t({1, bases[i].dim(), 1});
      for (std::size_t s = 0; s < bases[i].dim(); ++s) t.at({0, s, 0}) = v[s];
      tensors.push_back(std::move(t));
    }
    return MatrixProductState(std::move(bases), std::move(tensors), 0);
  }

  static MatrixProductState random_state(BasisChain bases,
                                         std::size_t max_bond,
                                         std::uint64_t seed) {
    if (bases.empty()) throw std::invalid_argument("empty basis chain");
    if (max_bond < 1) throw std::invalid_argument("random_state: max_bond < 1");
    const auto caps = bond_caps(bases);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<DenseTensor> tensors;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const std::size_t al = std::min(max_bond, caps[i]);
      const std::size_t ar = std::min(max_bond, caps[i + 1]);
      DenseTensor t({al, bases[i].dim(), ar});
      for (auto& v : t.data()) v = cplx{dist(rng), dist(rng)};
      tensors.push_back(std::move(t));
    }
    MatrixProductState psi(std::move(bases), std::move(tensors), std::nullopt);
    psi = psi.canonicalized(0);
    return psi.normalized();
  }

  std::size_t size() const { return bases_.size(); }
  const BasisChain& bases() const { return bases_; }
  const SiteBasis& basis(std::size_t i) const { return bases_.at(i); }
  const DenseTensor& tensor(std::size_t i) const { return tensors_.at(i); }
  DenseTensor& tensor(std::size_t i) { return tensors_.at(i); }
  std::optional<std::size_t> center() const { return center_; }

  // a_0 .. a_N (always 1 at both ends)
  std::vector<std::size_t> bond_dims() const {
    std::vector<std::size_t> dims;
    dims.reserve(size() + 1);
    dims.push_back(tensors_.front().extent(0));
    for (const auto& t : tensors_) dims.push_back(t.extent(2));
    return dims;
  }

  std::size_t max_bond_dim() const {
    std::size_t m = 1;
    for (const auto& t : tensors_) m = std::max(m, t.extent(2));
    return std::max(m, tensors_.front().extent(0));
  }

  // min(prod of physical dims left of cut, right of cut) for cut i = 0..N
  static std::vector<std::size_t> bond_caps(const BasisChain& bases) {
    const std::size_t n = bases.size();
    std::vector<std::size_t> left(n + 1, 1), right(n + 1, 1);
    const std::size_t limit = std::size_t{1} << 62;
    for (std::size_t i = 0; i < n; ++i)
      left[i + 1] = left[i] > limit / bases[i].dim() ? limit
                                                     : left[i] * bases[i].dim();
    for (std::size_t i = n; i-- > 0;)
      right[i] = right[i + 1] > limit / bases[i].dim()
                     ? limit
                     : right[i + 1] * bases[i].dim();
    std::vector<std::size_t> caps(n + 1);
    for (std::size_t i = 0; i <= n; ++i) caps[i] = std::min(left[i], right[i]);
    return caps;
  }

  double norm() const {
    if (center_) return tensors_[*center_].frobenius_norm();
    return std::sqrt(std::abs(self_overlap()));
  }

  MatrixProductState normalized() const {
    MatrixProductState out = *this;
    const double n = out.norm();
    if (n == 0.0) throw std::invalid_argument("normalized: zero state");
    if (out.center_)
      out.tensors_[*out.center_] *= cplx{1.0 / n, 0.0};
    else
      out.tensors_[0] *= cplx{1.0 / n, 0.0};
    return out;
  }

  MatrixProductState canonicalized(std::size_t new_center) const {
    if (new_center >= size())
      throw std::invalid_argument("canonicalized: center out of range");
    MatrixProductState out = *this;
    if (out.center_) {
      out.move_center(new_center);
      return out;
    }
    // no gauge information: orthonormalize both flanks
    for (std::size_t i = 0; i < new_center; ++i) out.push_right(i);
    for (std::size_t i = size() - 1; i > new_center; --i) out.push_left(i);
    out.center_ = new_center;
    return out;
  }

  // SVD-truncate every bond (left-to-right, starting right-canonical).
  // Returns the compressed state (center at the last site) and the sum of
  // per-bond discarded weights.
  std::pair<MatrixProductState, double> compressed(std::size_t max_bond,
                                                   double cutoff) const {
    if (max_bond < 1) throw std::invalid_argument("compressed: max_bond < 1");
    MatrixProductState out = canonicalized(0);
    double total_discarded = 0.0;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      const auto& t = out.tensors_[i];
      const std::size_t al = t.extent(0), d = t.extent(1), ar = t.extent(2);
      auto svd = svd_truncate(t.reshaped({al * d, ar}), max_bond, cutoff);
      total_discarded += svd.report.discarded_weight;
      const std::size_t k = svd.report.kept;
      out.tensors_[i] = svd.u.reshaped({al, d, k});
      DenseTensor sv = svd.v;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < ar; ++c)
          sv.at({r, c}) *= svd.s[r];
      out.tensors_[i + 1] = contract(sv, {1}, out.tensors_[i + 1], {0});
      out.center_ = i + 1;
    }
    return {std::move(out), total_discarded};
  }

  cplx self_overlap() const;

 private:
  friend cplx overlap(const MatrixProductState&, const MatrixProductState&);

  void check_consistency() const {
    if (bases_.empty() || tensors_.size() != bases_.size())
      throw std::invalid_argument("MPS: tensor/basis count mismatch");
    if (tensors_.front().extent(0) != 1 || tensors_.back().extent(2) != 1)
      throw std::invalid_argument("MPS: boundary bonds must be 1");
    for (std::size_t i = 0; i < bases_.size(); ++i) {
      if (tensors_[i].rank() != 3)
        throw std::invalid_argument("MPS: site tensors must be rank 3");
      if (tensors_[i].extent(1) != bases_[i].dim())
        throw std::invalid_argument("MPS: physical extent mismatch");
      if (i + 1 < bases_.size() &&
          tensors_[i].extent(2) != tensors_[i + 1].extent(0))
        throw std::invalid_argument("MPS: bond extent mismatch");
    }
    if (center_ && *center_ >= bases_.size())
      throw std::invalid_argument("MPS: center out of range");
  }

  // left-orthonormalize site i, absorbing the remainder into site i+1
  void push_right(std::size_t i) {
    const auto& t = tensors_[i];
    const std::size_t al = t.extent(0), d = t.extent(1), ar = t.extent(2);
    auto qr = qr_orthonormalize(t.reshaped({al * d, ar}), QrSide::Left);
    const std::size_t k = qr.factor.extent(1);
    tensors_[i] = qr.factor.reshaped({al, d, k});
    tensors_[i + 1] = contract(qr.remainder, {1}, tensors_[i + 1], {0});
  }

  // right-orthonormalize site i, absorbing the remainder into site i-1
  void push_left(std::size_t i) {
    const auto& t = tensors_[i];
    const std::size_t al = t.extent(0), d = t.extent(1), ar = t.extent(2);
    auto qr = qr_orthonormalize(t.reshaped({al, d * ar}), QrSide::Right);
    const std::size_t k = qr.factor.extent(0);
    tensors_[i] = qr.factor.reshaped({k, d, ar});
    tensors_[i - 1] = contract(tensors_[i - 1], {2}, qr.remainder, {0});
  }

  void move_center(std::size_t new_center) {
    while (*center_ < new_center) {
      push_right(*center_);
      ++*center_;
    }
    while (*center_ > new_center) {
      push_left(*center_);
      --*center_;
    }
  }

  BasisChain bases_;
  std::vector<DenseTensor> tensors_;
  std::optional<std::size_t> center_;
};

inline cplx overlap(const MatrixProductState& a, const MatrixProductState& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("overlap: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.basis(i).same_kind(b.basis(i)))
      throw std::invalid_argument("overlap: basis mismatch");
  DenseTensor env({1, 1});
  env.at({0, 0}) = 1.0;  // (bra, ket)
  for (std::size_t i = 0; i < a.size(); ++i) {
    // (bra,ket) x conj A (bra,d,bra') -> (ket, d, bra')
    DenseTensor t = contract(env, {0}, a.tensor(i).conjugated(), {0});
    // x B (ket,d,ket') over (ket,d) -> (bra', ket')
    env = contract(t, {0, 1}, b.tensor(i), {0, 1});
  }
  return env.at({0, 0});
}

inline cplx MatrixProductState::self_overlap() const {
  return overlap(*this, *this);
}

// <psi| op_i |psi> / <psi|psi> at a single site, any gauge.
inline cplx local_expectation(const MatrixProductState& psi, std::size_t site,
                              const MatrixXc& op) {
  if (site >= psi.size())
    throw std::invalid_argument("local_expectation: site out of range");
  const auto d = static_cast<Eigen::Index>(psi.basis(site).dim());
  if (op.rows() != d || op.cols() != d)
    throw std::invalid_argument("local_expectation: operator dimension");
  // reduce to the site via canonical moves for stability and speed
  MatrixProductState c = psi.canonicalized(site);
  const DenseTensor& m = c.tensor(site);
  DenseTensor opt = DenseTensor::from_matrix(op);
  // (a,d,b) x op(out,in) over d(in) -> (a,b,out) -> permute (a,out,b)
  DenseTensor om = contract(m, {1}, opt, {1}).permuted({0, 2, 1});
  cplx num{0, 0}, den{0, 0};
  for (std::size_t i = 0; i < m.size(); ++i) {
    num += std::conj(m[i]) * om[i];
    den += std::conj(m[i]) * m[i];
  }
  if (den == cplx{0, 0})
    throw std::invalid_argument("local_expectation: zero state");
  return num / den;
}

// Per-site expectation values of a named Hermitian operator.
inline std::vector<double> local_expectations(const MatrixProductState& psi,
                                              const std::string& op_name) {
  const std::size_t n = psi.size();
  for (std::size_t i = 0; i < n; ++i) {
    const MatrixXc& m = psi.basis(i).op(op_name);
    if ((m - MatrixXc(m.adjoint())).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("local_expectations: operator '" + op_name +
                                  "' is not Hermitian");
  }
  // right environments of <psi|psi>
  std::vector<DenseTensor> renv(n + 1, DenseTensor({1, 1}));
  renv[n].at({0, 0}) = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    DenseTensor t =
        contract(psi.tensor(i).conjugated(), {2}, renv[i + 1], {0});
    renv[i] = contract(t, {1, 2}, psi.tensor(i), {1, 2});  // (bra, ket)
  }
  const cplx den = renv[0].at({0, 0});
  if (den == cplx{0, 0})
    throw std::invalid_argument("local_expectations: zero state");

  std::vector<double> vals(n);
  DenseTensor lenv({1, 1});
  lenv.at({0, 0}) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& a = psi.tensor(i);
    DenseTensor opt = DenseTensor::from_matrix(psi.basis(i).op(op_name));
    DenseTensor oa = contract(a, {1}, opt, {1}).permuted({0, 2, 1});
    // lenv (bra,ket) x conjA -> (ket, out, bra')
    DenseTensor t = contract(lenv, {0}, a.conjugated(), {0});
    // x op*A over (ket, out) -> (bra', ket')
    DenseTensor mix = contract(t, {0, 1}, oa, {0, 1});
    DenseTensor val = contract(mix, {0, 1}, renv[i + 1], {0, 1});
    vals[i] = (val[0] / den).real();
    // advance plain left environment
    DenseTensor t2 = contract(lenv, {0}, a.conjugated(), {0});
    lenv = contract(t2, {0, 1}, a, {0, 1});
  }
  return vals;
}

// Contract the chain into a dense state vector (site 0 slowest index).
inline VectorXc mps_to_dense(const MatrixProductState& psi) {
  const std::size_t dim = chain_dimension(psi.bases());
  if (dim > (std::size_t{1} << 24))
    throw std::invalid_argument("mps_to_dense: dimension too large");
  DenseTensor acc = psi.tensor(0);  // (1, d0, a1)
  acc = acc.reshaped({acc.extent(1), acc.extent(2)});
  for (std::size_t i = 1; i < psi.size(); ++i) {
    acc = contract(acc, {acc.rank() - 1}, psi.tensor(i), {0});
  }
  // trailing bond extent is 1
  VectorXc v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = acc[i];
  return v;
}

// Exact (or truncated) MPS factorization of a dense state vector.
inline MatrixProductState mps_from_dense(const BasisChain& bases,
                                         const VectorXc& v,
                                         std::size_t max_bond, double cutoff) {
  const std::size_t dim = chain_dimension(bases);
  if (static_cast<std::size_t>(v.size()) != dim)
    throw std::invalid_argument("mps_from_dense: dimension mismatch");
  std::vector<DenseTensor> tensors(bases.size());
  std::size_t rest = dim;
  std::size_t a = 1;
  DenseTensor work({1, dim});
  for (std::size_t i = 0; i < dim; ++i) work[i] = v[i];
  for (std::size_t i = 0; i + 1 < bases.size(); ++i) {
    const std::size_t d = bases[i].dim();
    rest /= d;
    auto svd = svd_truncate(work.reshaped({a * d, rest}), max_bond, cutoff);
    const std::size_t k = svd.report.kept;
    tensors[i] = svd.u.reshaped({a, d, k});
    DenseTensor sv = svd.v;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < rest; ++c) sv.at({r, c}) *= svd.s[r];
    work = std::move(sv);
    a = k;
  }
  tensors.back() = work.reshaped({a, bases.back().dim(), 1});
  return MatrixProductState(bases, std::move(tensors), bases.size() - 1);
}

}  // namespace tnsim
