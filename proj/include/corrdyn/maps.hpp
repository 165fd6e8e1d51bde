#pragma once

// Rational maps on P^1 over Q and their action on finite Galois-stable sets.
//
// A set is stored as one squarefree primitive integer polynomial (its finite
// points) plus a flag for the point at infinity. Pullback substitutes the map
// into the homogenized defining form; pushforward eliminates the source
// variable with a resultant, sampled at small integer parameters and
// interpolated back.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/parallel.hpp"
#include "corrdyn/polyarith.hpp"
#include "corrdyn/roots.hpp"

namespace corrdyn {

// ---------------------------------------------------------------------------
// Points of P^1(Q)

class ProjPoint {
 public:
  ProjPoint() : ProjPoint(Rational(0)) {}
  ProjPoint(Rational v) : value_(std::move(v)) { value_.canonicalize(); }  // NOLINT: implicit by intent
  ProjPoint(long v) : value_(v) {}                                        // NOLINT
  static ProjPoint infinity() {
    ProjPoint p;
    p.inf_ = true;
    return p;
  }
  /// Point (a : b); (a : 0) is infinity. Not both zero.
  static ProjPoint from_pair(const Integer& a, const Integer& b) {
    if (sgn(b) == 0) {
      if (sgn(a) == 0) throw std::invalid_argument("(0 : 0) is not a projective point");
      return infinity();
    }
    return ProjPoint(Rational(a, b));
  }

  bool is_infinity() const { return inf_; }
  const Rational& value() const {
    if (inf_) throw std::logic_error("infinity has no affine value");
    return value_;
  }
  /// Numerator and positive denominator; (1, 0) for infinity.
  Integer num() const { return inf_ ? Integer(1) : value_.get_num(); }
  Integer den() const { return inf_ ? Integer(0) : value_.get_den(); }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.value_ == b.value_;
  }
  /// Infinity first, then by rational value.
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) {
    if (a.inf_ || b.inf_) return a.inf_ && !b.inf_;
    return a.value_ < b.value_;
  }

 private:
  Rational value_;
  bool inf_ = false;
};

inline std::string to_string(const ProjPoint& p) { return p.is_infinity() ? "inf" : p.value().get_str(); }

// ---------------------------------------------------------------------------
// Rational maps

/// f/g with gcd(f, g) = 1, jointly primitive, denominator with positive
/// leading coefficient, degree max(deg f, deg g) >= 1.
class RationalMap {
 public:
  const IntPoly& num() const { return f_; }
  const IntPoly& den() const { return g_; }
  int degree() const { return std::max(f_.degree(), g_.degree()); }
  bool is_polynomial() const { return g_.degree() == 0; }

  friend RationalMap make_map(IntPoly f, IntPoly g);

 private:
  IntPoly f_, g_;
};

inline RationalMap make_map(IntPoly f, IntPoly g) {
  if (g.is_zero()) throw std::invalid_argument("map denominator is zero");
  if (f.is_zero()) throw std::invalid_argument("map must be non-constant");
  const IntPoly h = gcd_poly(f, g);
  if (h.degree() > 0) {
    f = divexact(f, primitive_part(h));
    g = divexact(g, primitive_part(h));
  }
  Integer c = content(f);
  const Integer cg = content(g);
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cg.get_mpz_t());
  if (c != 1) {
    f = f.divexact(c);
    g = g.divexact(c);
  }
  if (sgn(g.lc()) < 0) {
    f = -f;
    g = -g;
  }
  if (std::max(f.degree(), g.degree()) < 1) throw std::invalid_argument("map must be non-constant");
  RationalMap m;
  m.f_ = std::move(f);
  m.g_ = std::move(g);
  return m;
}

inline RationalMap make_polynomial_map(IntPoly f) { return make_map(std::move(f), IntPoly{1}); }

inline std::string to_string(const RationalMap& F) {
  if (F.is_polynomial() && F.den().lc() == 1) return to_string(F.num());
  return "(" + to_string(F.num()) + ") / (" + to_string(F.den()) + ")";
}

/// Projective evaluation through the degree-d homogenization.
inline ProjPoint eval_map(const RationalMap& F, const ProjPoint& x) {
  const int d = F.degree();
  const Integer a = x.num(), b = x.den();
  return ProjPoint::from_pair(F.num().eval_homogeneous(a, b, d), F.den().eval_homogeneous(a, b, d));
}

/// F o G.
inline RationalMap compose_maps(const RationalMap& F, const RationalMap& G) {
  const int d = F.degree();
  return make_map(compose_fraction(F.num(), G.num(), G.den(), d), compose_fraction(F.den(), G.num(), G.den(), d));
}

inline bool maps_equal(const RationalMap& F, const RationalMap& G) {
  return F.num() * G.den() == G.num() * F.den();
}

// ---------------------------------------------------------------------------
// Finite subsets of P^1(Qbar)

class AlgSet {
 public:
  /// The empty set.
  AlgSet() : poly_{1} {}

  /// Roots of p (multiplicities dropped), plus infinity if requested.
  static AlgSet from_poly(const IntPoly& p, bool with_infinity = false) {
    AlgSet s;
    s.poly_ = squarefree_part(p);
    s.inf_ = with_infinity;
    return s;
  }
  static AlgSet from_points(const std::vector<ProjPoint>& pts) {
    IntPoly p{1};
    bool inf = false;
    for (const auto& x : pts) {
      if (x.is_infinity()) inf = true;
      else p = p * IntPoly::linear_root(x.value().get_num(), x.value().get_den());
    }
    return from_poly(p, inf);
  }
  static AlgSet infinity_only() { return from_poly(IntPoly{1}, true); }

  const IntPoly& poly() const { return poly_; }
  bool has_infinity() const { return inf_; }
  int finite_count() const { return poly_.degree(); }
  int cardinality() const { return poly_.degree() + (inf_ ? 1 : 0); }
  bool empty() const { return cardinality() == 0; }

  bool contains(const ProjPoint& x) const {
    if (x.is_infinity()) return inf_;
    return sgn(poly_.eval_homogeneous(x.num(), x.den(), poly_.degree())) == 0;
  }

  friend bool operator==(const AlgSet& a, const AlgSet& b) { return a.inf_ == b.inf_ && a.poly_ == b.poly_; }

 private:
  IntPoly poly_;
  bool inf_ = false;
};

inline bool is_subset(const AlgSet& x, const AlgSet& y) {
  if (x.has_infinity() && !y.has_infinity()) return false;
  return divides(x.poly(), y.poly());
}

/// x \ y.
inline AlgSet set_difference(const AlgSet& x, const AlgSet& y) {
  const IntPoly g = gcd_poly(x.poly(), y.poly());
  return AlgSet::from_poly(divexact(x.poly(), primitive_part(g)), x.has_infinity() && !y.has_infinity());
}

inline AlgSet set_union(const AlgSet& x, const AlgSet& y) {
  return AlgSet::from_poly(x.poly() * y.poly(), x.has_infinity() || y.has_infinity());
}

/// The rational points of S, sorted (infinity first). Candidates come from
/// real numeric roots via continued-fraction convergents; every reported
/// point is verified exactly.
inline std::vector<ProjPoint> rational_points(const AlgSet& S, long precision_bits = 0) {
  std::vector<ProjPoint> out;
  if (S.has_infinity()) out.push_back(ProjPoint::infinity());
  const IntPoly& p = S.poly();
  if (p.degree() < 1) return out;
  const Integer lc = abs(p.lc());
  if (p.degree() == 1) {
    out.push_back(ProjPoint(Rational(-p.coeff(0), p.coeff(1))));
    std::sort(out.begin(), out.end());
    return out;
  }
  long maxbits = 0;
  for (const auto& c : p.coeffs())
    if (sgn(c) != 0) maxbits = std::max<long>(maxbits, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  // Distinct rationals with denominators up to |lc| are 1/lc^2 apart, so
  // this many correct bits make every rational root a convergent.
  const long need = 2 * static_cast<long>(mpz_sizeinbase(lc.get_mpz_t(), 2)) + maxbits + 8;
  const auto roots = stable_integer_poly_roots(p, precision_bits > 0 ? precision_bits : 128, need);
  for (const auto& r : roots) {
    // Only roots whose imaginary part is negligible can be rational.
    const double scale = std::max(0.0, abs(r).log_abs());
    if (r.im.log_abs() > scale - static_cast<double>(need - 4) * std::log(2.0)) continue;
    mpq_class x;
    mpfr_get_q(x.get_mpq_t(), r.re.get());
    // The last convergent of x with denominator up to |lc| is the only
    // candidate close enough to be a root.
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    mpq_class rest = x;
    for (;;) {
      Integer a;
      mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
      const Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
      if (k2 > lc) break;
      h0 = h1;
      h1 = h2;
      k0 = k1;
      k1 = k2;
      rest -= a;
      if (sgn(rest) == 0) break;
      rest = 1 / rest;
    }
    if (sgn(k1) == 0) continue;
    const ProjPoint cand(Rational(h1, k1));
    if (S.contains(cand) && std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Points listed explicitly if every point is rational; otherwise the defining
/// polynomial.
inline std::string to_string(const AlgSet& S) {
  const auto pts = rational_points(S);
  if (static_cast<int>(pts.size()) == S.cardinality()) {
    std::string s = "{";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + to_string(pts[i]);
    return s + "}";
  }
  std::string s = "roots(" + to_string(S.poly()) + ")";
  if (S.has_infinity()) s += " + {inf}";
  return s;
}

// ---------------------------------------------------------------------------
// Pullback and pushforward

/// Degree of the unreduced pullback form: d * |S|.
inline long pullback_raw_degree(const RationalMap& F, const AlgSet& S) {
  return static_cast<long>(F.degree()) * S.cardinality();
}

/// F^{-1}(S).
inline AlgSet pullback_set(const RationalMap& F, const AlgSet& S) {
  if (S.empty()) return {};
  // The infinity flag adds one factor of the second homogeneous coordinate,
  // which the extra power of g in the degree-|S| substitution supplies.
  const IntPoly form = compose_fraction(S.poly(), F.num(), F.den(), S.cardinality());
  const bool inf = S.contains(eval_map(F, ProjPoint::infinity()));
  return AlgSet::from_poly(form, inf);
}

namespace detail {

/// Exact Newton interpolation through (x_j, y_j); the result must be integral.
inline IntPoly interpolate_integer(const std::vector<Integer>& xs, std::vector<Rational> ys) {
  const std::size_t n = xs.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      ys[i] = (ys[i] - ys[i - 1]) / Rational(xs[i] - xs[i - j]);
      if (i == j) break;
    }
  // Expand the Newton form from the innermost coefficient outwards.
  std::vector<Rational> c{ys[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<Rational> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * xs[k];
    }
    next[0] += ys[k];
    c = std::move(next);
  }
  std::vector<Integer> out;
  out.reserve(c.size());
  for (auto& v : c) {
    v.canonicalize();
    if (v.get_den() != 1) throw std::logic_error("resultant interpolation produced a non-integral coefficient");
    out.push_back(v.get_num());
  }
  return IntPoly(std::move(out));
}

/// Sample parameters 0, 1, -1, 2, -2, ...
inline std::vector<Integer> parameter_nodes(std::size_t count) {
  std::vector<Integer> xs;
  xs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const long k = static_cast<long>((j + 1) / 2);
    xs.emplace_back(j % 2 ? k : -k);
  }
  return xs;
}

}  // namespace detail

/// The binary-form resultant Res(t, u*g - v*f) at v = 1, as a polynomial in u
/// of degree <= deg t. Its roots are F(alpha) for finite roots alpha of t with
/// g(alpha) != 0; the degree drops once per alpha mapped to infinity.
inline IntPoly image_resultant(const RationalMap& F, const IntPoly& t, const ExecOptions& exec = {}) {
  const int k = t.degree();
  const int d = F.degree();
  const auto xs = detail::parameter_nodes(static_cast<std::size_t>(k) + 1);
  std::vector<Rational> ys(xs.size());
  parallel_for(xs.size(), exec.threads, [&](std::size_t j) {
    const IntPoly q = F.den() * xs[j] - F.num();
    Integer r = resultant(t, q);
    // Sylvester resultant at the actual degree of q; restore the formal degree d.
    if (q.degree() < d) r *= pow_int(t.lc(), static_cast<unsigned long>(d - q.degree()));
    ys[j] = Rational(r);
  });
  return detail::interpolate_integer(xs, std::move(ys));
}

/// F(T).
inline AlgSet pushforward_set(const RationalMap& F, const AlgSet& T, const ExecOptions& exec = {}) {
  if (T.empty()) return {};
  IntPoly image{1};
  bool inf = false;
  const int k = T.finite_count();
  if (k > 0) {
    image = image_resultant(F, T.poly(), exec);
    if (image.degree() < k) inf = true;
  }
  if (T.has_infinity()) {
    const ProjPoint at_inf = eval_map(F, ProjPoint::infinity());
    if (at_inf.is_infinity()) inf = true;
    else image = image * IntPoly::linear_root(at_inf.value().get_num(), at_inf.value().get_den());
  }
  return AlgSet::from_poly(image, inf);
}

struct RiemannHurwitzReport {
  long actual = 0;
  long lower = 0;
  long upper = 0;
  bool holds = false;
};

/// d(|S| - 2) + 2 <= |F^{-1}(S)| <= d |S|.
inline RiemannHurwitzReport verify_rh_bound(const RationalMap& F, const AlgSet& S) {
  const long d = F.degree();
  const long s = S.cardinality();
  RiemannHurwitzReport r;
  r.actual = pullback_set(F, S).cardinality();
  r.lower = d * (s - 2) + 2;
  r.upper = d * s;
  r.holds = r.lower <= r.actual && r.actual <= r.upper;
  return r;
}

}  // namespace corrdyn
