#include "tnsim/tensor.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace tnsim;
using testutil::random_tensor;

TEST(DenseTensor, ShapeAndLinearization) {
  DenseTensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  // last index fastest
  t.at({1, 2}) = cplx{5, 0};
  EXPECT_EQ(t[1 * 3 + 2], (cplx{5, 0}));
  EXPECT_THROW(t.at({2, 0}), std::out_of_range);
  EXPECT_THROW(DenseTensor({2, 0}), std::invalid_argument);
}

TEST(DenseTensor, PermuteRoundTrip) {
  auto t = random_tensor({2, 3, 4}, 7);
  auto p = t.permuted({2, 0, 1});
  EXPECT_EQ(p.shape(), (std::vector<std::size_t>{4, 2, 3}));
  EXPECT_EQ(p.at({3, 1, 2}), t.at({1, 2, 3}));
  auto back = p.permuted({1, 2, 0});
  EXPECT_EQ(testutil::max_abs_diff(back, t), 0.0);
}

TEST(Contract, IdentityActsTrivially) {
  DenseTensor id({2, 2});
  id.at({0, 0}) = 1.0;
  id.at({1, 1}) = 1.0;
  DenseTensor v({2});
  v.at({0}) = cplx{1, 2};
  v.at({1}) = cplx{3, -1};
  auto r = contract(id, {1}, v, {0});
  EXPECT_EQ(r.shape(), (std::vector<std::size_t>{2}));
  EXPECT_NEAR(std::abs(r.at({0}) - v.at({0})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r.at({1}) - v.at({1})), 0.0, 1e-15);
}

TEST(Contract, DotProduct) {
  DenseTensor v({2});
  v.at({0}) = 3.0;
  v.at({1}) = 4.0;
  auto r = contract(v, {0}, v, {0});
  EXPECT_EQ(r.rank(), 0u);
  EXPECT_NEAR(r[0].real(), 25.0, 1e-14);
}

TEST(Contract, MatchesTripleLoopOracle) {
  auto a = random_tensor({4, 5}, 11);
  auto b = random_tensor({5, 6}, 13);
  auto c = contract(a, {1}, b, {0});
  auto oracle = testutil::matmul_oracle(a.data(), b.data(), 4, 5, 6);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < oracle.size(); ++i)
    max_diff = std::max(max_diff, std::abs(oracle[i] - c[i]));
  EXPECT_LE(max_diff, 1e-12);
}

TEST(Contract, FreeAxisOrderAndMultiAxis) {
  auto a = random_tensor({2, 3, 4}, 17);
  auto b = random_tensor({4, 3, 5}, 19);
  auto r = contract(a, {1, 2}, b, {1, 0});
  EXPECT_EQ(r.shape(), (std::vector<std::size_t>{2, 5}));
  // spot check one element against a direct sum
  cplx acc{0, 0};
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 4; ++k)
      acc += a.at({1, j, k}) * b.at({k, j, 2});
  EXPECT_NEAR(std::abs(r.at({1, 2}) - acc), 0.0, 1e-12);
}

TEST(Contract, ErrorsOnBadAxes) {
  auto a = random_tensor({2, 3}, 2);
  auto b = random_tensor({4, 2}, 3);
  EXPECT_THROW(contract(a, {1}, b, {0}), std::invalid_argument);   // 3 vs 4
  EXPECT_THROW(contract(a, {2}, b, {0}), std::invalid_argument);   // range
  EXPECT_THROW(contract(a, {0, 0}, b, {0, 1}), std::invalid_argument);
}

TEST(Contract, Bilinearity) {
  auto a = random_tensor({3, 4}, 23);
  auto b = random_tensor({4, 2}, 29);
  const cplx alpha{1.7, -0.3};
  auto lhs = contract(alpha * a, {1}, b, {0});
  auto rhs = alpha * contract(a, {1}, b, {0});
  EXPECT_LE(testutil::max_abs_diff(lhs, rhs), 1e-12);
}

TEST(SvdTruncate, EqualSingularValuesDiscardHalf) {
  DenseTensor id({2, 2});
  id.at({0, 0}) = 1.0;
  id.at({1, 1}) = 1.0;
  auto r = svd_truncate(id, 1, 0.0);
  EXPECT_EQ(r.report.kept, 1u);
  EXPECT_NEAR(r.report.discarded_weight, 0.5, 1e-14);
}

TEST(SvdTruncate, RankOneKeepsEverything) {
  DenseTensor m({3, 2});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      m.at({i, j}) = cplx(double(i + 1), 0) * cplx(double(j + 1), 0);
  auto r = svd_truncate(m, 1, 0.0);
  EXPECT_NEAR(r.report.discarded_weight, 0.0, 1e-14);
}

TEST(SvdTruncate, ReconstructsRandomMatrix) {
  auto m = random_tensor({6, 4}, 31);
  auto r = svd_truncate(m, 4, 0.0);
  // U * diag(S) * V
  MatrixXc u = r.u.as_matrix();
  MatrixXc v = r.v.as_matrix();
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(r.s.data(), r.s.size());
  MatrixXc rec = u * s.asDiagonal().toDenseMatrix().cast<cplx>() * v;
  MatrixXc orig = m.as_matrix();
  EXPECT_LE((rec - orig).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SvdTruncate, FrobeniusNormMatchesSingularValues) {
  auto m = random_tensor({7, 5}, 37);
  auto r = svd_truncate(m, 5, 0.0);
  double sum_sq = 0.0;
  for (double s : r.report.singular_values) sum_sq += s * s;
  const double f2 = m.frobenius_norm() * m.frobenius_norm();
  EXPECT_LE(std::abs(sum_sq - f2) / f2, 1e-10);
}

TEST(SvdTruncate, SingularValuesDescendingAndCutoff) {
  auto m = random_tensor({8, 8}, 41);
  auto r = svd_truncate(m, 8, 0.0);
  for (std::size_t i = 1; i < r.report.singular_values.size(); ++i)
    EXPECT_GE(r.report.singular_values[i - 1], r.report.singular_values[i]);
  // a strong relative cutoff keeps only the top value
  auto rc = svd_truncate(m, 8, 0.999999);
  EXPECT_EQ(rc.report.kept, 1u);
}

TEST(SvdTruncate, ZeroMatrixYieldsZeroSingularValues) {
  DenseTensor z({3, 3});
  auto r = svd_truncate(z, 2, 1e-12);
  EXPECT_EQ(r.report.kept, 2u);
  EXPECT_NEAR(r.report.singular_values[0], 0.0, 1e-300);
  EXPECT_NEAR(r.report.discarded_weight, 0.0, 1e-300);
  // factors stay orthonormal even for the zero matrix
  MatrixXc u = r.u.as_matrix();
  EXPECT_LE((MatrixXc(u.adjoint() * u) - MatrixXc::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(SvdTruncate, RejectsBadInput) {
  EXPECT_THROW(svd_truncate(DenseTensor({2, 2, 2}), 1, 0.0),
               std::invalid_argument);
  DenseTensor nan_m({2, 2});
  nan_m.at({0, 0}) = cplx{std::nan(""), 0};
  EXPECT_THROW(svd_truncate(nan_m, 1, 0.0), std::invalid_argument);
}

TEST(QrOrthonormalize, LeftFactorIsIsometry) {
  auto m = random_tensor({5, 3}, 43);
  auto [q, r] = qr_orthonormalize(m, QrSide::Left);
  MatrixXc qm = q.as_matrix();
  MatrixXc prod = qm.adjoint() * qm;
  EXPECT_LE((prod - MatrixXc::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  MatrixXc rec = qm * r.as_matrix();
  EXPECT_LE((rec - MatrixXc(m.as_matrix())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QrOrthonormalize, RightFactorHasOrthonormalRows) {
  auto m = random_tensor({3, 6}, 47);
  auto [q, r] = qr_orthonormalize(m, QrSide::Right);
  MatrixXc qm = q.as_matrix();
  MatrixXc prod = qm * qm.adjoint();
  EXPECT_LE((prod - MatrixXc::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  MatrixXc rec = r.as_matrix() * qm;
  EXPECT_LE((rec - MatrixXc(m.as_matrix())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QrOrthonormalize, OrthonormalInputStaysPut) {
  MatrixXc u = MatrixXc::Identity(4, 2);
  auto [q, r] = qr_orthonormalize(DenseTensor::from_matrix(u), QrSide::Left);
  // factor equals input up to column phases; remainder diagonal unit-magnitude
  MatrixXc rm = r.as_matrix();
  for (Eigen::Index i = 0; i < rm.rows(); ++i)
    for (Eigen::Index j = 0; j < rm.cols(); ++j) {
      if (i == j)
        EXPECT_NEAR(std::abs(rm(i, j)), 1.0, 1e-12);
      else
        EXPECT_NEAR(std::abs(rm(i, j)), 0.0, 1e-12);
    }
}

TEST(QrOrthonormalize, ZeroColumnDoesNotFail) {
  DenseTensor m({4, 3});
  for (std::size_t i = 0; i < 4; ++i) {
    m.at({i, 0}) = cplx(double(i) + 1.0, 0.0);
    m.at({i, 2}) = cplx(1.0, double(i));
  }
  // column 1 all zero
  auto [q, r] = qr_orthonormalize(m, QrSide::Left);
  MatrixXc rec = q.as_matrix() * r.as_matrix();
  EXPECT_LE((rec - MatrixXc(m.as_matrix())).cwiseAbs().maxCoeff(), 1e-12);
}
