#pragma once

// Dense complex tensors with a fixed row-major linearization (last index
// fastest), plus the contraction and factorization kernels the MPS/MPO
// layers are built from.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace tnsim {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using RowMatrixXc =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class DenseTensor {
 public:
  DenseTensor() : shape_{}, data_(1, cplx{0.0, 0.0}) {}  // rank-0 scalar

  explicit DenseTensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)) {
    for (std::size_t e : shape_) {
      if (e == 0) throw std::invalid_argument("DenseTensor: zero extent");
    }
    data_.assign(total_size(shape_), cplx{0.0, 0.0});
  }

  DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    for (std::size_t e : shape_) {
      if (e == 0) throw std::invalid_argument("DenseTensor: zero extent");
    }
    if (data_.size() != total_size(shape_))
      throw std::invalid_argument("DenseTensor: data/shape size mismatch");
  }

  static DenseTensor scalar(cplx v) {
    DenseTensor t;
    t.data_[0] = v;
    return t;
  }

  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  cplx& operator[](std::size_t linear) { return data_[linear]; }
  const cplx& operator[](std::size_t linear) const { return data_[linear]; }

  // Row-major strides: stride of the last axis is 1.
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(shape_.size(), 1);
    for (std::size_t i = shape_.size(); i-- > 1;)
      s[i - 1] = s[i] * shape_[i];
    return s;
  }

  cplx& at(std::initializer_list<std::size_t> idx) {
    return data_[offset_of(idx)];
  }
  const cplx& at(std::initializer_list<std::size_t> idx) const {
    return data_[offset_of(idx)];
  }

  // Same data, new shape; total size must match.
  DenseTensor reshaped(std::vector<std::size_t> new_shape) const {
    if (total_size(new_shape) != data_.size())
      throw std::invalid_argument("reshaped: size mismatch");
    return DenseTensor(std::move(new_shape), data_);
  }

  DenseTensor permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != shape_.size())
      throw std::invalid_argument("permuted: rank mismatch");
    if (shape_.empty()) return *this;
    std::vector<bool> seen(perm.size(), false);
    std::vector<std::size_t> out_shape(perm.size());
    const auto in_strides = strides();
    std::vector<std::size_t> out_axis_stride(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (perm[i] >= shape_.size() || seen[perm[i]])
        throw std::invalid_argument("permuted: invalid permutation");
      seen[perm[i]] = true;
      out_shape[i] = shape_[perm[i]];
      out_axis_stride[i] = in_strides[perm[i]];
    }
    DenseTensor out(out_shape);
    const std::size_t r = out_shape.size();
    std::vector<std::size_t> idx(r, 0);
    std::size_t off = 0;
    for (std::size_t lin = 0; lin < out.data_.size(); ++lin) {
      out.data_[lin] = data_[off];
      for (std::size_t ax = r; ax-- > 0;) {
        ++idx[ax];
        off += out_axis_stride[ax];
        if (idx[ax] < out_shape[ax]) break;
        off -= out_axis_stride[ax] * out_shape[ax];
        idx[ax] = 0;
      }
    }
    return out;
  }

  DenseTensor conjugated() const {
    DenseTensor out = *this;
    for (auto& v : out.data_) v = std::conj(v);
    return out;
  }

  DenseTensor& operator*=(cplx a) {
    for (auto& v : data_) v *= a;
    return *this;
  }

  DenseTensor& operator+=(const DenseTensor& other) {
    if (other.shape_ != shape_)
      throw std::invalid_argument("operator+=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (const auto& v : data_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
  }

  // Rank-2 views as Eigen matrices (row-major map onto the data).
  Eigen::Map<const RowMatrixXc> as_matrix() const {
    if (rank() != 2) throw std::invalid_argument("as_matrix: rank != 2");
    return {data_.data(), static_cast<Eigen::Index>(shape_[0]),
            static_cast<Eigen::Index>(shape_[1])};
  }

  static DenseTensor from_matrix(const MatrixXc& m) {
    DenseTensor t({static_cast<std::size_t>(m.rows()),
                   static_cast<std::size_t>(m.cols())});
    Eigen::Map<RowMatrixXc>(t.data_.data(), m.rows(), m.cols()) = m;
    return t;
  }

  static std::size_t total_size(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }

 private:
  std::size_t offset_of(std::initializer_list<std::size_t> idx) const {
    if (idx.size() != shape_.size())
      throw std::invalid_argument("index rank mismatch");
    const auto s = strides();
    std::size_t off = 0;
    std::size_t k = 0;
    for (std::size_t i : idx) {
      if (i >= shape_[k]) throw std::out_of_range("tensor index out of range");
      off += i * s[k++];
    }
    return off;
  }

  std::vector<std::size_t> shape_;
  std::vector<cplx> data_;
};

inline DenseTensor operator*(cplx a, DenseTensor t) {
  t *= a;
  return t;
}

// Contract paired axes of a and b. Result carries the free axes of a (in
// their original order) followed by the free axes of b.
inline DenseTensor contract(const DenseTensor& a,
                            const std::vector<std::size_t>& axes_a,
                            const DenseTensor& b,
                            const std::vector<std::size_t>& axes_b) {
  if (axes_a.size() != axes_b.size())
    throw std::invalid_argument("contract: axis lists differ in length");
  auto check_axes = [](const DenseTensor& t,
                       const std::vector<std::size_t>& axes) {
    std::vector<bool> seen(t.rank(), false);
    for (std::size_t ax : axes) {
      if (ax >= t.rank()) throw std::invalid_argument("contract: axis out of range");
      if (seen[ax]) throw std::invalid_argument("contract: duplicate axis");
      seen[ax] = true;
    }
    return seen;
  };
  const auto used_a = check_axes(a, axes_a);
  const auto used_b = check_axes(b, axes_b);
  std::size_t contracted = 1;
  for (std::size_t i = 0; i < axes_a.size(); ++i) {
    if (a.extent(axes_a[i]) != b.extent(axes_b[i]))
      throw std::invalid_argument("contract: extent mismatch on paired axes");
    contracted *= a.extent(axes_a[i]);
  }

  std::vector<std::size_t> free_a, free_b, perm_a, perm_b;
  std::vector<std::size_t> out_shape;
  for (std::size_t ax = 0; ax < a.rank(); ++ax) {
    if (!used_a[ax]) {
      perm_a.push_back(ax);
      free_a.push_back(a.extent(ax));
      out_shape.push_back(a.extent(ax));
    }
  }
  perm_a.insert(perm_a.end(), axes_a.begin(), axes_a.end());
  perm_b = axes_b;
  for (std::size_t ax = 0; ax < b.rank(); ++ax) {
    if (!used_b[ax]) {
      perm_b.push_back(ax);
      free_b.push_back(b.extent(ax));
      out_shape.push_back(b.extent(ax));
    }
  }

  const DenseTensor pa = a.permuted(perm_a);
  const DenseTensor pb = b.permuted(perm_b);
  const std::size_t rows = DenseTensor::total_size(free_a);
  const std::size_t cols = DenseTensor::total_size(free_b);

  DenseTensor out(out_shape.empty() ? std::vector<std::size_t>{} : out_shape);
  Eigen::Map<const RowMatrixXc> ma(pa.data().data(),
                                   static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(contracted));
  Eigen::Map<const RowMatrixXc> mb(pb.data().data(),
                                   static_cast<Eigen::Index>(contracted),
                                   static_cast<Eigen::Index>(cols));
  Eigen::Map<RowMatrixXc> mo(out.data().data(),
                             static_cast<Eigen::Index>(rows),
                             static_cast<Eigen::Index>(cols));
  mo.noalias() = ma * mb;
  return out;
}

struct TruncationReport {
  std::size_t kept = 0;
  double discarded_weight = 0.0;
  std::vector<double> singular_values;  // all of them, descending
};

struct SvdResult {
  DenseTensor u;       // rows x kept, orthonormal columns
  std::vector<double> s;  // kept singular values, descending
  DenseTensor v;       // kept x cols, orthonormal rows
  TruncationReport report;
};

// Truncated SVD of a rank-2 tensor. Keeps at most max_keep singular values
// and drops those below cutoff * s_max; always keeps at least one so that
// rank-deficient (even all-zero) inputs factor without failure.
inline SvdResult svd_truncate(const DenseTensor& m, std::size_t max_keep,
                              double cutoff) {
  if (m.rank() != 2) throw std::invalid_argument("svd_truncate: rank != 2");
  if (max_keep < 1) throw std::invalid_argument("svd_truncate: max_keep < 1");
  if (cutoff < 0.0) throw std::invalid_argument("svd_truncate: cutoff < 0");
  if (!m.all_finite())
    throw std::invalid_argument("svd_truncate: non-finite entries");

  const MatrixXc a = m.as_matrix();
  Eigen::JacobiSVD<MatrixXc> svd;
  Eigen::BDCSVD<MatrixXc> bdc;
  VectorXc dummy;
  Eigen::VectorXd sv;
  MatrixXc u_full, v_full;
  // BDCSVD is faster for the larger blocks DMRG/TDVP produce; Jacobi is
  // more robust for tiny ones.
  if (std::min(a.rows(), a.cols()) <= 16) {
    svd.compute(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv = svd.singularValues();
    u_full = svd.matrixU();
    v_full = svd.matrixV();
  } else {
    bdc.compute(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv = bdc.singularValues();
    u_full = bdc.matrixU();
    v_full = bdc.matrixV();
  }

  const std::size_t n = static_cast<std::size_t>(sv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += sv[i] * sv[i];

  const double s_max = n > 0 ? sv[0] : 0.0;
  std::size_t keep = n;
  if (s_max > 0.0 && cutoff > 0.0) {
    keep = 0;
    while (keep < n && sv[keep] >= cutoff * s_max) ++keep;
  }
  keep = std::max<std::size_t>(1, std::min(keep, max_keep));

  double kept_weight = 0.0;
  for (std::size_t i = 0; i < keep; ++i) kept_weight += sv[i] * sv[i];

  SvdResult out;
  out.report.kept = keep;
  out.report.discarded_weight =
      total > 0.0 ? std::max(0.0, (total - kept_weight) / total) : 0.0;
  out.report.singular_values.assign(sv.data(), sv.data() + n);
  out.s.assign(sv.data(), sv.data() + keep);
  out.u = DenseTensor::from_matrix(u_full.leftCols(keep));
  out.v = DenseTensor::from_matrix(v_full.leftCols(keep).adjoint());
  return out;
}

enum class QrSide { Left, Right };

struct QrResult {
  DenseTensor factor;     // orthonormal columns (Left) or rows (Right)
  DenseTensor remainder;  // factor * remainder = m (Left), remainder * factor = m (Right)
};

inline QrResult qr_orthonormalize(const DenseTensor& m, QrSide side) {
  if (m.rank() != 2)
    throw std::invalid_argument("qr_orthonormalize: rank != 2");
  if (!m.all_finite())
    throw std::invalid_argument("qr_orthonormalize: non-finite entries");
  const MatrixXc a = m.as_matrix();
  QrResult out;
  if (side == QrSide::Left) {
    const Eigen::Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<MatrixXc> qr(a);
    MatrixXc q = qr.householderQ() * MatrixXc::Identity(a.rows(), k);
    MatrixXc r = q.adjoint() * a;
    // Zero the strictly-lower part left by roundoff.
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      for (Eigen::Index i = j + 1; i < r.rows(); ++i) r(i, j) = cplx{0, 0};
    out.factor = DenseTensor::from_matrix(q);
    out.remainder = DenseTensor::from_matrix(r);
  } else {
    const Eigen::Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<MatrixXc> qr(a.adjoint());
    MatrixXc q = qr.householderQ() * MatrixXc::Identity(a.cols(), k);
    MatrixXc r = q.adjoint() * a.adjoint();
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      for (Eigen::Index i = j + 1; i < r.rows(); ++i) r(i, j) = cplx{0, 0};
    out.factor = DenseTensor::from_matrix(q.adjoint());     // k x cols
    out.remainder = DenseTensor::from_matrix(r.adjoint());  // rows x k
  }
  return out;
}

}  // namespace tnsim
