#include "tnsim/mps.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace tnsim;

namespace {

BasisChain spins(std::size_t n) {
  return BasisChain(n, SiteBasis::spin_half());
}

VectorXc up() {
  VectorXc v(2);
  v << 1.0, 0.0;
  return v;
}

VectorXc plus_x() {
  VectorXc v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

VectorXc vacuum(std::size_t d) {
  VectorXc v = VectorXc::Zero(d);
  v[0] = 1.0;
  return v;
}

double isometry_residual(const MatrixProductState& psi, std::size_t center) {
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto& t = psi.tensor(i);
    const std::size_t a = t.extent(0), d = t.extent(1), b = t.extent(2);
    if (i < center) {
      MatrixXc m = t.reshaped({a * d, b}).as_matrix();
      worst = std::max(worst, (MatrixXc(m.adjoint() * m) -
                               MatrixXc::Identity(b, b))
                                  .cwiseAbs()
                                  .maxCoeff());
    } else if (i > center) {
      MatrixXc m = t.reshaped({a, d * b}).as_matrix();
      worst = std::max(worst, (MatrixXc(m * m.adjoint()) -
                               MatrixXc::Identity(a, a))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  }
  return worst;
}

}  // namespace

TEST(MpsProduct, AllUpChain) {
  auto psi = MatrixProductState::product_state(spins(3), {up(), up(), up()});
  EXPECT_EQ(psi.bond_dims(), (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
  EXPECT_EQ(psi.center().value(), 0u);
}

TEST(MpsProduct, SpinAndBosonVacuum) {
  BasisChain bases{SiteBasis::spin_half(), SiteBasis::boson(5),
                   SiteBasis::boson(5)};
  auto psi = MatrixProductState::product_state(
      bases, {up(), vacuum(5), vacuum(5)});
  auto n1 = local_expectation(psi, 1, bases[1].op("n"));
  auto n2 = local_expectation(psi, 2, bases[2].op("n"));
  EXPECT_NEAR(std::abs(n1), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(n2), 0.0, 1e-14);
}

TEST(MpsProduct, SelfOverlapIsOne) {
  auto psi = MatrixProductState::product_state(spins(4),
                                               {plus_x(), up(), plus_x(), up()});
  EXPECT_NEAR(std::abs(overlap(psi, psi) - cplx{1.0, 0.0}), 0.0, 1e-12);
}

TEST(MpsProduct, RejectsBadLocalStates) {
  VectorXc unnorm(2);
  unnorm << 1.0, 1.0;
  EXPECT_THROW(
      MatrixProductState::product_state(spins(2), {up(), unnorm}),
      std::invalid_argument);
  VectorXc wrong_dim(3);
  wrong_dim << 1.0, 0.0, 0.0;
  EXPECT_THROW(
      MatrixProductState::product_state(spins(2), {up(), wrong_dim}),
      std::invalid_argument);
}

TEST(Canonicalize, RoundTripPreservesOverlap) {
  auto psi = MatrixProductState::random_state(spins(6), 4, 42);
  const cplx norm2 = overlap(psi, psi);
  auto right = psi.canonicalized(5);
  auto back = right.canonicalized(0);
  EXPECT_NEAR(std::abs(overlap(back, psi) - norm2), 0.0, 1e-10);
}

TEST(Canonicalize, IsometryResidualsAtAnyCenter) {
  auto psi = MatrixProductState::random_state(spins(7), 4, 7);
  for (std::size_t c : {0u, 3u, 6u}) {
    auto g = psi.canonicalized(c);
    EXPECT_LE(isometry_residual(g, c), 1e-10);
    EXPECT_NEAR(std::abs(overlap(g, psi) - overlap(psi, psi)), 0.0, 1e-10);
  }
}

TEST(Canonicalize, OutOfRangeThrows) {
  auto psi = MatrixProductState::random_state(spins(3), 2, 1);
  EXPECT_THROW(psi.canonicalized(3), std::invalid_argument);
}

TEST(Compress, ProductStateUntouched) {
  auto psi = MatrixProductState::product_state(spins(4),
                                               {up(), up(), plus_x(), up()});
  auto [c, discarded] = psi.compressed(8, 0.0);
  EXPECT_EQ(discarded, 0.0);
  EXPECT_EQ(c.bond_dims(), psi.bond_dims());
  EXPECT_NEAR(std::abs(overlap(c, psi) - cplx{1.0, 0.0}), 0.0, 1e-12);
}

TEST(Compress, LosslessWhenBondsSuffice) {
  auto psi = MatrixProductState::random_state(spins(6), 4, 99).normalized();
  auto [c, discarded] = psi.compressed(8, 0.0);
  EXPECT_NEAR(discarded, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(overlap(c, psi)), 1.0, 1e-12);
}

TEST(Compress, MatchesDenseTruncationOracle) {
  // compare fidelity against the dense-vector truncated-SVD oracle
  const std::size_t n = 8;
  auto psi = MatrixProductState::random_state(spins(n), 8, 1234).normalized();
  auto [c, discarded] = psi.compressed(4, 0.0);
  const double fidelity = std::norm(overlap(c.normalized(), psi));

  // oracle: same sequential truncated-SVD factorization on the dense vector
  VectorXc dense = mps_to_dense(psi);
  auto oracle_mps = mps_from_dense(spins(n), dense, 4, 0.0);
  const double oracle_fid = std::norm(overlap(oracle_mps.normalized(), psi));
  EXPECT_NEAR(fidelity, oracle_fid, 1e-8);
  // fidelity bound from accumulated discarded weight
  EXPECT_GE(fidelity, 1.0 - discarded - 1e-10);
}

TEST(Compress, NeverIncreasesBonds) {
  auto psi = MatrixProductState::random_state(spins(8), 6, 5).normalized();
  auto [c, discarded] = psi.compressed(3, 0.0);
  auto before = psi.bond_dims();
  auto after = c.bond_dims();
  for (std::size_t i = 0; i < after.size(); ++i) {
    EXPECT_LE(after[i], before[i]);
    EXPECT_LE(after[i], 3u);
  }
}

TEST(DenseRoundTrip, MatchesCoefficientOrdering) {
  // |up down> has index 0*2 + 1 = 1 in site-major (last site fastest) order
  VectorXc down(2);
  down << 0.0, 1.0;
  auto psi = MatrixProductState::product_state(spins(2), {up(), down});
  VectorXc v = mps_to_dense(psi);
  EXPECT_NEAR(std::abs(v[1] - cplx{1.0, 0.0}), 0.0, 1e-14);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);

  auto psi2 = mps_from_dense(spins(2), v, 4, 0.0);
  EXPECT_NEAR(std::abs(overlap(psi2, psi) - cplx{1.0, 0.0}), 0.0, 1e-12);
}

TEST(LocalExpectations, AllUpAndPlusX) {
  auto psi = MatrixProductState::product_state(spins(3), {up(), up(), up()});
  auto vals = local_expectations(psi, "sz");
  for (double v : vals) EXPECT_NEAR(v, 1.0, 1e-12);

  auto psix = MatrixProductState::product_state(
      spins(3), {plus_x(), plus_x(), plus_x()});
  for (double v : local_expectations(psix, "sz")) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(LocalExpectations, MatchesDenseOracle) {
  auto psi = MatrixProductState::random_state(spins(5), 4, 321).normalized();
  auto vals = local_expectations(psi, "sz");
  VectorXc v = mps_to_dense(psi);
  // dense oracle: <v| sz_i |v>
  for (std::size_t site = 0; site < 5; ++site) {
    cplx acc{0, 0};
    const std::size_t stride = std::size_t{1} << (4 - site);
    for (std::size_t idx = 0; idx < 32; ++idx) {
      const bool dn = (idx / stride) % 2 == 1;
      acc += std::conj(v[idx]) * (dn ? -1.0 : 1.0) * v[idx];
    }
    EXPECT_NEAR(vals[site], acc.real(), 1e-10);
  }
}

TEST(LocalExpectations, RejectsNonHermitian) {
  auto psi = MatrixProductState::product_state(spins(2), {up(), up()});
  EXPECT_THROW(local_expectations(psi, "sp"), std::invalid_argument);
}

TEST(Norm, PositiveForNonzeroStates) {
  auto psi = MatrixProductState::random_state(spins(5), 3, 8);
  EXPECT_GT(overlap(psi, psi).real(), 0.0);
  EXPECT_NEAR(overlap(psi, psi).imag(), 0.0, 1e-12);
}
