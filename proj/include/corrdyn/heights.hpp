#pragma once

// Height functions, all in natural-log scale:
//   weil_height     log max(|p|, |q|) on P^1(Q)
//   logmax_height   log max(1, |z|) on C
//   mahler_measure  log M(p); for a squarefree primitive p this is the sum of
//                   the Weil heights of its roots, so set-level totals need no
//                   factorization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "corrdyn/bigfloat.hpp"
#include "corrdyn/maps.hpp"
#include "corrdyn/polyarith.hpp"
#include "corrdyn/roots.hpp"

namespace corrdyn {

struct HeightValue {
  double value = 0;
  double error_bound = 0;
  /// Set when the input was a constant polynomial.
  bool constant_input = false;
};

/// max(|p|, |q|) for x = p/q in lowest terms; 1 at infinity.
inline Integer naive_height(const ProjPoint& x) {
  if (x.is_infinity()) return 1;
  const Integer p = abs(x.value().get_num());
  const Integer& q = x.value().get_den();
  return p > q ? p : q;
}

inline HeightValue weil_height(const ProjPoint& x) {
  const Integer h = naive_height(x);
  return {h == 1 ? 0.0 : log_abs(h), 0.0, false};
}

inline HeightValue logmax_height(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::invalid_argument("log-max height of a non-finite number");
  return {std::max(0.0, std::log(std::abs(z))), 0.0, false};
}

inline HeightValue logmax_height(const MpComplex& z) {
  if (!z.is_finite()) throw std::invalid_argument("log-max height of a non-finite number");
  const BigFloat r = abs(z);
  return {r.log_abs() > 0 ? log(r).to_double() : 0.0, 0.0, false};
}

// ---------------------------------------------------------------------------
// Mahler measure

struct MahlerOptions {
  long start_precision_bits = 128;
  long max_precision_bits = 16384;
  /// Precision doubling stops once successive values differ by less than this.
  double tolerance = 1e-12;
  bool graeffe_check = true;
  /// Allowed gap between root-product and Graeffe values.
  double graeffe_tolerance = 1e-9;
};

struct MahlerMeasure : HeightValue {
  long precision_bits = 0;
  double graeffe_value = 0;
  double graeffe_error = 0;
  bool graeffe_agrees = true;
};

namespace detail {

/// sum over roots of log max(1, |r|), plus the roots themselves.
inline double outside_log_sum(const std::vector<MpComplex>& roots, mpfr_prec_t prec) {
  BigFloat acc(prec);
  for (const auto& r : roots) {
    const BigFloat m = abs(r);
    if (m.log_abs() > 0) mpfr_add(acc.get(), acc.get(), log(m).get(), MPFR_RNDN);
  }
  return acc.to_double();
}

}  // namespace detail

/// log(|lc| * prod max(1, |root|)), roots counted with multiplicity.
/// Repeated roots are separated first so the root finder only sees squarefree
/// input; precision doubles until two successive values agree to tolerance.
inline MahlerMeasure mahler_measure(const IntPoly& p, const MahlerOptions& opt = {}) {
  if (p.is_zero()) throw std::invalid_argument("Mahler measure of the zero polynomial");
  MahlerMeasure out;
  if (p.degree() == 0) {
    out.value = log_abs(p.lc());
    out.constant_input = true;
    out.graeffe_value = out.value;
    return out;
  }
  const auto layers = squarefree_layers(p);
  const double base = log_abs(p.lc());

  long prec = opt.start_precision_bits;
  std::vector<std::vector<MpComplex>> roots(layers.size());
  auto evaluate = [&](long bits) {
    double total = base;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      roots[i] = integer_poly_roots(layers[i], bits, roots[i].empty() ? nullptr : &roots[i]);
      // lc(p) is already in base; layers only contribute root moduli.
      total += detail::outside_log_sum(roots[i], bits);
    }
    return total;
  };
  double prev = evaluate(prec);
  double delta = INFINITY;
  while (prec < opt.max_precision_bits) {
    prec *= 2;
    const double cur = evaluate(prec);
    delta = std::fabs(cur - prev);
    prev = cur;
    if (delta < opt.tolerance) break;
  }
  if (!(delta < opt.tolerance))
    throw RootFinderError("Mahler measure did not stabilize below " + std::to_string(opt.max_precision_bits) + " bits");
  out.value = prev;
  out.error_bound = delta;
  out.precision_bits = prec;
  if (opt.graeffe_check) {
    const auto g = graeffe_log_mahler(p, 40, std::max<long>(256, prec));
    out.graeffe_value = g.log_mahler;
    out.graeffe_error = g.error_bound;
    out.graeffe_agrees = std::fabs(g.log_mahler - out.value) <= opt.graeffe_tolerance + g.error_bound;
  }
  return out;
}

struct SetHeight {
  HeightValue total;
  double average = 0;
  int cardinality = 0;
};

/// Sum of the heights of the points of S (infinity contributes 0) and its mean.
inline SetHeight total_height(const AlgSet& S, const MahlerOptions& opt = {}) {
  if (S.empty()) throw std::invalid_argument("height of the empty set");
  SetHeight h;
  h.cardinality = S.cardinality();
  if (S.poly().degree() > 0) {
    const MahlerMeasure m = mahler_measure(S.poly(), opt);
    h.total = {m.value, m.error_bound, false};
  }
  h.average = h.total.value / h.cardinality;
  return h;
}

// ---------------------------------------------------------------------------
// Functoriality constant and Northcott enumeration

struct FunctorialityEstimate {
  RationalMap map;
  std::size_t sample_count = 0;
  double c_hat = 0;
  ProjPoint worst_point;
};

/// |h(R(z)) - deg R * h(z)| for one rational point, evaluated as the log of an
/// exact ratio so that equal heights give exactly zero.
inline double height_defect(const RationalMap& R, const ProjPoint& z) {
  const Integer image = naive_height(eval_map(R, z));
  const Integer base = pow_int(naive_height(z), static_cast<unsigned long>(R.degree()));
  return std::fabs(log_abs(Rational(image, base)));
}

/// Empirical lower bound for the constant C in |h(R(z)) - deg R h(z)| < C.
inline FunctorialityEstimate estimate_functorial_constant(const RationalMap& R, const std::vector<ProjPoint>& samples) {
  if (samples.empty()) throw std::invalid_argument("functoriality estimate needs at least one sample");
  FunctorialityEstimate est{R, samples.size(), -1.0, samples.front()};
  for (const auto& z : samples) {
    const double d = height_defect(R, z);
    if (d > est.c_hat) {
      est.c_hat = d;
      est.worst_point = z;
    }
  }
  return est;
}

/// Largest N with log N <= bound (up to 1e-12 slack).
inline Integer height_bound_to_integer(double bound) {
  if (!(bound >= 0)) throw std::invalid_argument("height bound must be non-negative");
  if (bound > 12) throw std::invalid_argument("height bound too large to enumerate");
  long n = static_cast<long>(std::floor(std::exp(bound)));
  while (std::log(static_cast<double>(n + 1)) <= bound + 1e-12) ++n;
  while (n > 1 && std::log(static_cast<double>(n)) > bound + 1e-12) --n;
  return n;
}

/// All points of P^1(Q) with Weil height <= bound: infinity first, then by
/// naive height, then by value.
inline std::vector<ProjPoint> enumerate_rational_points(double bound) {
  const Integer N = height_bound_to_integer(bound);
  const long n = N.get_si();
  std::vector<ProjPoint> pts;
  pts.push_back(ProjPoint::infinity());
  for (long h = 1; h <= n; ++h) {
    std::vector<ProjPoint> level;
    // Points with max(|p|, q) == h exactly.
    for (long q = 1; q <= h; ++q) {
      for (long p = -h; p <= h; ++p) {
        if (std::max(std::labs(p), q) != h) continue;
        Integer g;
        mpz_gcd_ui(g.get_mpz_t(), Integer(p).get_mpz_t(), static_cast<unsigned long>(q));
        if (p == 0 ? q != 1 : g != 1) continue;
        level.emplace_back(Rational(Integer(p), Integer(q)));
      }
    }
    std::sort(level.begin(), level.end());
    pts.insert(pts.end(), level.begin(), level.end());
  }
  return pts;
}

}  // namespace corrdyn
