#pragma once

// Polynomial roots at multiprecision: Aberth-Ehrlich simultaneous iteration
// with Newton-polygon starting points, plus Graeffe root squaring used as an
// independent route to the Mahler measure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrdyn/bigfloat.hpp"
#include "corrdyn/polyarith.hpp"

namespace corrdyn {

class RootFinderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double log_abs(const MpComplex& z) {
  const double lr = z.re.log_abs();
  const double li = z.im.log_abs();
  const double hi = std::max(lr, li);
  if (std::isinf(hi)) return hi;
  const double lo = std::min(lr, li);
  return hi + 0.5 * std::log1p(std::exp(2.0 * (lo - hi)));
}

/// Starting points spread on the circles given by the upper convex hull of
/// (k, log|a_k|). Requires a_0 != 0 and a_n != 0.
inline std::vector<MpComplex> newton_polygon_guesses(std::span<const MpComplex> a, mpfr_prec_t prec) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<std::pair<int, double>> pts;
  for (int k = 0; k <= n; ++k) {
    const double l = log_abs(a[static_cast<std::size_t>(k)]);
    if (!std::isinf(l)) pts.emplace_back(k, l);
  }
  std::vector<std::pair<int, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& m = hull.back();
      const double cross = (m.first - o.first) * (p.second - o.second) - (m.second - o.second) * (p.first - o.first);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  std::vector<MpComplex> z;
  z.reserve(static_cast<std::size_t>(n));
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int cnt = hull[e + 1].first - hull[e].first;
    const double log_r = (hull[e].second - hull[e + 1].second) / cnt;
    const BigFloat r = exp(BigFloat(log_r, prec));
    for (int t = 0; t < cnt; ++t) {
      const double theta = two_pi * t / cnt + two_pi * static_cast<double>(z.size()) / n + 0.4;
      z.emplace_back(r * BigFloat(std::cos(theta), prec), r * BigFloat(std::sin(theta), prec));
    }
  }
  return z;
}

}  // namespace detail

struct AberthOptions {
  long precision_bits = 128;
  /// 0 picks a degree-dependent cap.
  int max_iterations = 0;
};

/// All complex roots, with multiplicity, of sum a_k z^k. The top coefficient
/// must be nonzero. Exact zero roots are split off first.
inline std::vector<MpComplex> aberth_roots(std::span<const MpComplex> coeffs, const AberthOptions& opt = {},
                                           const std::vector<MpComplex>* initial = nullptr) {
  const mpfr_prec_t prec = opt.precision_bits;
  if (coeffs.empty()) throw std::invalid_argument("root finding on the zero polynomial");
  const auto& top = coeffs.back();
  if (top.re.is_zero() && top.im.is_zero()) throw std::invalid_argument("leading coefficient is zero");
  std::size_t zeros = 0;
  while (zeros < coeffs.size() - 1 && coeffs[zeros].re.is_zero() && coeffs[zeros].im.is_zero()) ++zeros;

  std::vector<MpComplex> a;
  a.reserve(coeffs.size() - zeros);
  for (std::size_t k = zeros; k < coeffs.size(); ++k) {
    MpComplex c(prec);
    mpfr_set(c.re.get(), coeffs[k].re.get(), MPFR_RNDN);
    mpfr_set(c.im.get(), coeffs[k].im.get(), MPFR_RNDN);
    a.push_back(std::move(c));
  }
  std::vector<MpComplex> roots;
  for (std::size_t k = 0; k < zeros; ++k) roots.emplace_back(prec);
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(MpComplex(-a[0].re, -a[0].im) / a[1]);
    return roots;
  }

  std::vector<MpComplex> z;
  if (initial && initial->size() == static_cast<std::size_t>(n)) {
    for (const auto& w : *initial) {
      MpComplex c(prec);
      mpfr_set(c.re.get(), w.re.get(), MPFR_RNDN);
      mpfr_set(c.im.get(), w.im.get(), MPFR_RNDN);
      z.push_back(std::move(c));
    }
  } else {
    z = detail::newton_polygon_guesses(a, prec);
  }

  std::vector<double> loga(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) loga[k] = detail::log_abs(a[k]);

  const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 300 + 4 * n;
  const double log_u = -static_cast<double>(prec) * std::log(2.0);
  const double log_stop = std::log(16.0 * (n + 1)) + log_u;

  std::vector<char> done(static_cast<std::size_t>(n), 0);
  MpComplex pv(prec), dv(prec), tmp(prec), s(prec), newton(prec), w(prec), diff(prec);
  BigFloat t1(prec), t2(prec);
  int remaining = n;
  for (int iter = 0; iter < max_iter && remaining > 0; ++iter) {
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<std::size_t>(i)]) continue;
      MpComplex& zi = z[static_cast<std::size_t>(i)];
      // Horner for p and p'.
      mpc_inplace::set(pv, a[static_cast<std::size_t>(n)]);
      mpfr_set_zero(dv.re.get(), 1);
      mpfr_set_zero(dv.im.get(), 1);
      for (int k = n - 1; k >= 0; --k) {
        mpc_inplace::mul(tmp, dv, zi, t1);
        mpc_inplace::add(dv, tmp, pv);
        mpc_inplace::mul(tmp, pv, zi, t1);
        mpc_inplace::add(pv, tmp, a[static_cast<std::size_t>(k)]);
      }
      if (pv.re.is_zero() && pv.im.is_zero()) {
        done[static_cast<std::size_t>(i)] = 1;
        --remaining;
        continue;
      }
      // Backward-error test: |p(z)| against the rounding level of sum |a_k||z|^k.
      const double lz = detail::log_abs(zi);
      double lmax = -INFINITY;
      for (int k = 0; k <= n; ++k)
        lmax = std::max(lmax, loga[static_cast<std::size_t>(k)] + (std::isinf(lz) ? (k ? lz : 0.0) : k * lz));
      const bool small_residual = detail::log_abs(pv) <= lmax + log_stop;

      mpc_inplace::div(newton, pv, dv, t1, t2);
      mpfr_set_zero(s.re.get(), 1);
      mpfr_set_zero(s.im.get(), 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        mpc_inplace::sub(diff, zi, z[static_cast<std::size_t>(j)]);
        // 1/diff = conj(diff)/|diff|^2
        mpfr_sqr(t1.get(), diff.re.get(), MPFR_RNDN);
        mpfr_sqr(t2.get(), diff.im.get(), MPFR_RNDN);
        mpfr_add(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
        mpfr_div(t2.get(), diff.re.get(), t1.get(), MPFR_RNDN);
        mpfr_add(s.re.get(), s.re.get(), t2.get(), MPFR_RNDN);
        mpfr_div(t2.get(), diff.im.get(), t1.get(), MPFR_RNDN);
        mpfr_sub(s.im.get(), s.im.get(), t2.get(), MPFR_RNDN);
      }
      // w = N / (1 - N*S)
      mpc_inplace::mul(tmp, newton, s, t1);
      mpfr_ui_sub(tmp.re.get(), 1, tmp.re.get(), MPFR_RNDN);
      mpfr_neg(tmp.im.get(), tmp.im.get(), MPFR_RNDN);
      if (tmp.re.is_zero() && tmp.im.is_zero()) {
        mpc_inplace::set(w, newton);
      } else {
        mpc_inplace::div(w, newton, tmp, t1, t2);
      }
      if (!w.is_finite()) throw RootFinderError("Aberth correction is not finite");
      mpc_inplace::sub(tmp, zi, w);
      mpc_inplace::set(zi, tmp);

      const double lw = detail::log_abs(w);
      const double lzi = detail::log_abs(zi);
      if (small_residual || lw <= lzi + log_u + std::log(8.0)) {
        done[static_cast<std::size_t>(i)] = 1;
        --remaining;
      }
    }
  }
  if (remaining > 0)
    throw RootFinderError("Aberth iteration did not converge: " + std::to_string(remaining) + " of " +
                          std::to_string(n) + " roots unresolved at " + std::to_string(prec) + " bits");
  for (auto& r : z) roots.push_back(std::move(r));
  return roots;
}

inline std::vector<MpComplex> to_complex_coeffs(const IntPoly& p, mpfr_prec_t prec) {
  std::vector<MpComplex> a;
  a.reserve(p.size());
  for (const auto& c : p.coeffs()) a.emplace_back(BigFloat(c, prec), BigFloat(prec));
  return a;
}

/// Complex roots of an integer polynomial, with multiplicity.
inline std::vector<MpComplex> integer_poly_roots(const IntPoly& p, long precision_bits,
                                                 const std::vector<MpComplex>* initial = nullptr) {
  if (p.is_zero()) throw std::invalid_argument("root finding on the zero polynomial");
  const auto a = to_complex_coeffs(p, precision_bits);
  return aberth_roots(a, {precision_bits, 0}, initial);
}

/// Roots of a squarefree p, recomputed at doubling precision until no root
/// moves by more than 2^-tol_bits * max(1, |r|) between two rounds.
inline std::vector<MpComplex> stable_integer_poly_roots(const IntPoly& p, long start_bits = 128, long tol_bits = 50,
                                                        long max_bits = 1L << 16) {
  const double log_tol = -static_cast<double>(tol_bits) * std::numbers::ln2;
  long bits = std::max(start_bits, tol_bits + 64);
  auto prev = integer_poly_roots(p, bits);
  while (bits < max_bits) {
    bits *= 2;
    auto cur = integer_poly_roots(p, bits, &prev);
    double worst = -INFINITY;
    for (const auto& r : cur) {
      double best = INFINITY;
      for (const auto& q : prev) best = std::min(best, abs(r - q).log_abs());
      worst = std::max(worst, best - std::max(0.0, abs(r).log_abs()));
    }
    prev = std::move(cur);
    if (worst <= log_tol) return prev;
  }
  throw RootFinderError("roots did not stabilize below " + std::to_string(max_bits) + " bits");
}

// ---------------------------------------------------------------------------
// Graeffe root squaring

struct GraeffeEstimate {
  double log_mahler = 0;
  /// Half-width of the rigorous coefficient-bound bracket after the last step.
  double error_bound = 0;
  int steps = 0;
};

/// log M(p) from the coefficient growth of successive root-squared
/// polynomials. Coefficients are renormalized every step; the scale is kept
/// as a separate logarithm.
inline GraeffeEstimate graeffe_log_mahler(const IntPoly& p, int max_steps = 40, long precision_bits = 256,
                                          double target = 1e-13) {
  if (p.is_zero()) throw std::invalid_argument("Mahler measure of the zero polynomial");
  const int n = p.degree();
  if (n == 0) return {log_abs(p.lc()), 0.0, 0};
  const mpfr_prec_t prec = precision_bits;

  std::vector<double> log_binom(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) log_binom[static_cast<std::size_t>(j)] = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);

  std::vector<BigFloat> c;
  c.reserve(static_cast<std::size_t>(n) + 1);
  for (const auto& v : p.coeffs()) c.emplace_back(v, prec);
  double scale = 0;  // log of the factor divided out of c

  auto renormalize = [&] {
    double lmax = -INFINITY;
    for (const auto& v : c) lmax = std::max(lmax, v.log_abs());
    BigFloat f = exp(BigFloat(-lmax, prec));
    for (auto& v : c) mpfr_mul(v.get(), v.get(), f.get(), MPFR_RNDN);
    scale += lmax;
  };
  auto bracket = [&](double& lo, double& hi) {
    lo = -INFINITY;
    double sumsq = 0;
    for (int j = 0; j <= n; ++j) {
      const double l = c[static_cast<std::size_t>(j)].log_abs();
      if (std::isinf(l)) continue;
      lo = std::max(lo, l - log_binom[static_cast<std::size_t>(j)]);
      sumsq += std::exp(2.0 * l);
    }
    hi = 0.5 * std::log(sumsq);
  };

  renormalize();
  GraeffeEstimate out;
  std::vector<BigFloat> next(static_cast<std::size_t>(n) + 1, BigFloat(prec));
  BigFloat acc(prec), t(prec);
  double denom = 1.0;
  for (int k = 1; k <= max_steps; ++k) {
    for (int j = 0; j <= n; ++j) {
      mpfr_sqr(acc.get(), c[static_cast<std::size_t>(j)].get(), MPFR_RNDN);
      for (int s = 1; j - s >= 0 && j + s <= n; ++s) {
        mpfr_mul(t.get(), c[static_cast<std::size_t>(j - s)].get(), c[static_cast<std::size_t>(j + s)].get(), MPFR_RNDN);
        mpfr_mul_2ui(t.get(), t.get(), 1, MPFR_RNDN);
        if (s & 1) mpfr_sub(acc.get(), acc.get(), t.get(), MPFR_RNDN);
        else mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
      }
      mpfr_set(next[static_cast<std::size_t>(j)].get(), acc.get(), MPFR_RNDN);
    }
    std::swap(c, next);
    scale *= 2.0;
    denom *= 2.0;
    renormalize();
    double lo = 0, hi = 0;
    bracket(lo, hi);
    out.log_mahler = (scale + 0.5 * (lo + hi)) / denom;
    out.error_bound = 0.5 * (hi - lo) / denom;
    out.steps = k;
    if (out.error_bound < target) break;
  }
  return out;
}

}  // namespace corrdyn
