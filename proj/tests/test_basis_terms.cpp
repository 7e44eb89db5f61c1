#include <gtest/gtest.h>

#include "tnsim/basis.hpp"
#include "tnsim/terms.hpp"

using namespace tnsim;

namespace {

double hermiticity_defect(const MatrixXc& m) {
  return (m - MatrixXc(m.adjoint())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(SiteBasis, DimensionsMatchKind) {
  EXPECT_EQ(SiteBasis::spin_half().dim(), 2u);
  EXPECT_EQ(SiteBasis::boson(7).dim(), 7u);
  EXPECT_EQ(SiteBasis::electronic().dim(), 2u);
  EXPECT_EQ(SiteBasis::exp_dvr(11, 1.0).dim(), 11u);
  EXPECT_THROW(SiteBasis::exp_dvr(10, 1.0), std::invalid_argument);
  EXPECT_THROW(SiteBasis::boson(1), std::invalid_argument);
}

TEST(SiteBasis, NamedGeneratorsAreHermitian) {
  const auto spin = SiteBasis::spin_half();
  EXPECT_LE(hermiticity_defect(spin.op("sx")), 1e-12);
  EXPECT_LE(hermiticity_defect(spin.op("sz")), 1e-12);
  const auto bos = SiteBasis::boson(6);
  EXPECT_LE(hermiticity_defect(bos.op("n")), 1e-12);
  EXPECT_LE(hermiticity_defect(bos.op("x_dimless")), 1e-12);
  EXPECT_LE(hermiticity_defect(bos.op("p_dimless")), 1e-12);
  const auto dvr = SiteBasis::exp_dvr(9, 2.0);
  EXPECT_LE(hermiticity_defect(dvr.op("dvr_kin")), 1e-12);
}

TEST(SiteBasis, UnknownOperatorThrows) {
  EXPECT_THROW(SiteBasis::spin_half().op("b"), std::invalid_argument);
}

TEST(SiteBasis, BosonLadderTruncation) {
  const auto bos = SiteBasis::boson(4);
  const MatrixXc b = bos.op("b");
  // b|n> = sqrt(n)|n-1>, amplitude out of the top level truncated
  EXPECT_NEAR(std::abs(b(2, 3) - std::sqrt(3.0)), 0.0, 1e-14);
  EXPECT_NEAR(b.col(0).norm(), 0.0, 1e-14);
  // (omega/2)(p^2 + x^2) has spectrum omega(n + 1/2) away from truncation;
  // n_plus_half realizes it exactly on the truncated space
  const MatrixXc nh = bos.op("n_plus_half");
  for (Eigen::Index k = 0; k < 4; ++k)
    EXPECT_NEAR(nh(k, k).real(), k + 0.5, 1e-14);
}

TEST(SiteBasis, ExpDvrFreeRotorSpectrum) {
  const auto dvr = SiteBasis::exp_dvr(5, 1.0);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(dvr.op("dvr_kin"));
  // {0, 0.5, 0.5, 2, 2} = k^2/2 for k = -2..2
  const std::vector<double> expected{0.0, 0.5, 0.5, 2.0, 2.0};
  for (int i = 0; i < 5; ++i)
    EXPECT_NEAR(es.eigenvalues()[i], expected[i], 1e-10);
}

TEST(SiteBasis, ExpDvrKineticAnnihilatesConstant) {
  const auto dvr = SiteBasis::exp_dvr(11, 3.0);
  VectorXc c = VectorXc::Constant(11, cplx{1.0, 0.0});
  EXPECT_LE((dvr.op("dvr_kin") * c).norm(), 1e-12);
}

TEST(SiteBasis, DvrPotentialsAreDiagonalGridSamples) {
  const auto dvr = SiteBasis::exp_dvr(7, 1.0);
  const MatrixXc cosm = dvr.op("dvr_cos");
  for (int j = 0; j < 7; ++j)
    EXPECT_NEAR(cosm(j, j).real(), std::cos(dvr.grid()[j]), 1e-14);
  EXPECT_NEAR(cosm.cwiseAbs().sum(), cosm.diagonal().cwiseAbs().sum(), 1e-14);
  // custom potential via dvr_potential commutes with dvr_cos (both diagonal)
  const MatrixXc v = dvr.dvr_potential([](double th) { return th * th; });
  EXPECT_LE((v * cosm - cosm * v).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SiteBasis, WithOpExtendsRegistry) {
  auto dvr = SiteBasis::exp_dvr(5, 1.0);
  auto dvr2 = dvr.with_op("my_pot", dvr.dvr_potential([](double) { return 1.0; }));
  EXPECT_TRUE(dvr2.has_op("my_pot"));
  EXPECT_FALSE(dvr.has_op("my_pot"));
}

TEST(Terms, ValidateCatchesErrors) {
  BasisChain bases{SiteBasis::spin_half(), SiteBasis::boson(3)};
  EXPECT_NO_THROW(validate_terms({term(1.0, {{0, "sz"}, {1, "n"}})}, bases));
  EXPECT_THROW(validate_terms({}, bases), std::invalid_argument);
  EXPECT_THROW(validate_terms({term(1.0, {{0, "nope"}})}, bases),
               std::invalid_argument);
  EXPECT_THROW(validate_terms({term(1.0, {{2, "sz"}})}, bases),
               std::invalid_argument);
  EXPECT_THROW(validate_terms({term(1.0, {{1, "n"}, {1, "n"}})}, bases),
               std::invalid_argument);
  EXPECT_THROW(validate_terms({term(1.0, {})}, bases), std::invalid_argument);
}

TEST(Terms, MergeSumsDuplicatesAndDropsZeros) {
  TermList terms{term(1.0, {{0, "sz"}}), term(2.0, {{0, "sz"}}),
                 term(1.0, {{0, "sx"}}), term(-1.0, {{0, "sx"}})};
  auto merged = merge_terms(terms);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].factors[0].second, "sz");
  EXPECT_NEAR(std::abs(merged[0].coefficient - cplx{3.0, 0.0}), 0.0, 1e-15);
}
