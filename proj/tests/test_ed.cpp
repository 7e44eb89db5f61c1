#include "tnsim/ed.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace tnsim;

namespace {

BasisChain spins(std::size_t n) { return BasisChain(n, SiteBasis::spin_half()); }

}  // namespace

TEST(EdGround, SingleSpinTransverseField) {
  const double h = 1.7;
  TermList terms{term(-h, {{0, "sx"}})};
  auto res = ed_ground(terms, spins(1));
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.energy, -h, 1e-10);
  // eigenvector (|up> + |down>)/sqrt(2) up to a phase
  VectorXc target(2);
  target << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(target.dot(res.vector)), 1.0, 1e-9);
}

TEST(EdGround, TwoSiteIsingClosedForm) {
  TermList terms{term(-1.0, {{0, "sz"}, {1, "sz"}}), term(-1.0, {{0, "sx"}}),
                 term(-1.0, {{1, "sx"}})};
  auto res = ed_ground(terms, spins(2));
  EXPECT_NEAR(res.energy, -std::sqrt(5.0), 1e-10);
}

TEST(EdGround, DimensionCapEnforced) {
  EXPECT_THROW(DenseTermAction(TermList{term(1.0, {{0, "sz"}})}, spins(21)),
               std::invalid_argument);
}

TEST(DenseTermAction, HermitianOnRandomVectors) {
  const std::size_t n = 6;
  TermList terms{term(-1.0, {{0, "sz"}, {3, "sz"}}),
                 term(0.5, {{1, "sx"}}),
                 term(cplx{0.0, 0.7}, {{2, "sp"}}),
                 term(cplx{0.0, -0.7}, {{2, "sm"}})};
  DenseTermAction h(terms, spins(n));
  for (int trial = 0; trial < 4; ++trial) {
    auto u = testutil::random_vector(h.dimension(), 100 + trial);
    auto v = testutil::random_vector(h.dimension(), 200 + trial);
    VectorXc hu(u.size()), hv(v.size());
    h.apply(u, hu);
    h.apply(v, hv);
    EXPECT_NEAR(std::abs(u.dot(hv) - std::conj(v.dot(hu))), 0.0, 1e-10);
  }
}

TEST(ExactPropagate, FreeSpinCosine) {
  const double delta = 1.3;
  TermList terms{term(delta / 2.0, {{0, "sx"}})};
  VectorXc psi0(2);
  psi0 << 1.0, 0.0;
  const double dt = 0.05;
  const std::size_t n_steps = 200;
  auto traj = exact_propagate(terms, spins(1), psi0, dt, n_steps,
                              {{"sz", {term(1.0, {{0, "sz"}})}}});
  const auto& sz = traj.series("sz");
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = dt * double(k);
    EXPECT_NEAR(sz[k], std::cos(delta * t), 1e-10);
  }
}

TEST(ExactPropagate, DiagonalHamiltonianFreezesPopulations) {
  TermList terms{term(0.9, {{0, "sz"}}), term(0.4, {{1, "sz"}})};
  VectorXc psi0 = testutil::random_vector(4, 11);
  psi0.normalize();
  auto traj = exact_propagate(terms, spins(2), psi0, 0.1, 50,
                              {{"sz0", {term(1.0, {{0, "sz"}})}},
                               {"sz1", {term(1.0, {{1, "sz"}})}}});
  for (const auto& [name, series] : traj.observables)
    for (double v : series) EXPECT_NEAR(v, series[0], 1e-12);
}

TEST(ExactPropagate, NormAndEnergyConserved) {
  const std::size_t n = 4;
  TermList terms;
  for (std::size_t i = 0; i + 1 < n; ++i)
    terms.push_back(term(-1.0, {{i, "sz"}, {i + 1, "sz"}}));
  for (std::size_t i = 0; i < n; ++i) terms.push_back(term(-1.2, {{i, "sx"}}));
  VectorXc psi0 = testutil::random_vector(16, 3);
  psi0.normalize();
  auto traj = exact_propagate(terms, spins(n), psi0, 0.02, 100, {});
  for (double nn : traj.norms) EXPECT_NEAR(nn, 1.0, 1e-12);
  const double e0 = traj.energies[0];
  for (double e : traj.energies)
    EXPECT_LE(std::abs(e - e0), 1e-10 * std::max(1.0, std::abs(e0)));
}
