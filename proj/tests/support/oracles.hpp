#pragma once

// Reference computations that share no code path with the library routines
// they check.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "corrdyn/polyarith.hpp"

namespace corrdyn::testing {

/// Sylvester determinant by fraction-free (Bareiss) elimination.
inline Integer sylvester_resultant(const IntPoly& p, const IntPoly& q) {
  const int n = p.degree(), m = q.degree();
  const int N = n + m;
  if (N == 0) return 1;
  std::vector<std::vector<Integer>> M(static_cast<std::size_t>(N), std::vector<Integer>(static_cast<std::size_t>(N), 0));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) M[r][r + i] = p.coeff(static_cast<std::size_t>(n - i));
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) M[m + r][r + i] = q.coeff(static_cast<std::size_t>(m - i));
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (sgn(M[k][k]) == 0) {
      int swap = -1;
      for (int r = k + 1; r < N; ++r)
        if (sgn(M[r][k]) != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      std::swap(M[k], M[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i)
      for (int j = k + 1; j < N; ++j) {
        Integer v = M[i][j] * M[k][k] - M[i][k] * M[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        M[i][j] = v;
      }
    prev = M[k][k];
  }
  return sign * M[N - 1][N - 1];
}

/// Schoolbook expansion of p(f(z)) through repeated multiplication.
inline IntPoly expand_composition(const IntPoly& p, const IntPoly& f) {
  IntPoly acc;
  IntPoly power{1};
  for (int i = 0; i <= p.degree(); ++i) {
    acc += power * p.coeff(static_cast<std::size_t>(i));
    power = power * f;
  }
  return acc;
}

/// Companion-matrix eigenvalues in double precision.
inline std::vector<std::complex<double>> companion_roots(const IntPoly& p) {
  const int n = p.degree();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  const double lc = p.lc().get_d();
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -p.coeff(static_cast<std::size_t>(i)).get_d() / lc;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  std::vector<std::complex<double>> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

/// log(|lc| prod max(1, |r|)) from companion roots.
inline double companion_log_mahler(const IntPoly& p) {
  double acc = std::log(std::fabs(p.lc().get_d()));
  for (auto r : companion_roots(p)) acc += std::max(0.0, std::log(std::abs(r)));
  return acc;
}

}  // namespace corrdyn::testing
