#pragma once

#include <complex>
#include <random>
#include <vector>

#include "tnsim/tensor.hpp"

namespace tnsim::testutil {

inline DenseTensor random_tensor(const std::vector<std::size_t>& shape,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseTensor t(shape);
  for (auto& v : t.data()) v = cplx{dist(rng), dist(rng)};
  return t;
}

inline Eigen::VectorXcd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx{dist(rng), dist(rng)};
  return v;
}

// Independent dense matrix-multiply oracle: plain triple loop, no Eigen.
inline std::vector<cplx> matmul_oracle(const std::vector<cplx>& a,
                                       const std::vector<cplx>& b,
                                       std::size_t m, std::size_t k,
                                       std::size_t n) {
  std::vector<cplx> c(m * n, cplx{0, 0});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < n; ++j)
        c[i * n + j] += a[i * k + l] * b[l * n + j];
  return c;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace tnsim::testutil
