#pragma once

// Dense univariate polynomials over Z with GMP coefficients.
//
// Everything above this layer (maps, heights, dynamics) reduces to a handful
// of kernel operations here: content/primitive split, subresultant GCD and
// resultant, squarefree reduction and the homogenized substitution
// g^D * p(f/g) used for pullbacks.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corrdyn {

using Integer = mpz_class;
using Rational = mpq_class;

/// Natural log of |x| for a nonzero big integer, without overflow.
inline double log_abs(const Integer& x) {
  if (sgn(x) == 0) throw std::domain_error("log of zero");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

/// Natural log of |x| for a nonzero rational; exactly 0 when |x| = 1.
inline double log_abs(const Rational& x) {
  if (sgn(x) == 0) throw std::domain_error("log of zero");
  if (abs(x.get_num()) == x.get_den()) return 0.0;
  return log_abs(x.get_num()) - log_abs(x.get_den());
}

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Dense polynomial, coefficient i belongs to z^i. The zero polynomial has no
/// stored coefficients; otherwise the last coefficient is nonzero.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly constant(const Integer& v) { return IntPoly(std::vector<Integer>{v}); }
  static IntPoly monomial(const Integer& v, std::size_t k) {
    std::vector<Integer> c(k + 1);
    c[k] = v;
    return IntPoly(std::move(c));
  }
  /// The polynomial a*z - b, vanishing at b/a.
  static IntPoly linear_root(const Integer& b, const Integer& a) {
    return IntPoly(std::vector<Integer>{-b, a});
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  const Integer& lc() const {
    if (c_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
    return c_.back();
  }
  /// Coefficient of z^i; zero beyond the degree.
  Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
  std::span<const Integer> coeffs() const { return c_; }

  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

  IntPoly operator-() const {
    IntPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  IntPoly& operator+=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  IntPoly& operator-=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  IntPoly& operator*=(const Integer& s) {
    if (sgn(s) == 0) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator*(IntPoly a, const Integer& s) { return a *= s; }
  friend IntPoly operator*(const Integer& s, IntPoly a) { return a *= s; }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
    }
    return IntPoly(std::move(r));
  }

  /// Exact division of every coefficient by s; throws if s does not divide.
  IntPoly divexact(const Integer& s) const {
    IntPoly r = *this;
    for (auto& v : r.c_) {
      if (!mpz_divisible_p(v.get_mpz_t(), s.get_mpz_t()))
        throw std::domain_error("inexact scalar division");
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), s.get_mpz_t());
    }
    return r;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Integer> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(r));
  }

  Integer eval(const Integer& x) const {
    Integer r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  /// Homogenized value sum c_i a^i b^(D-i); its sign of vanishing matches p(a/b).
  Integer eval_homogeneous(const Integer& a, const Integer& b, int D) const {
    if (D < degree()) throw std::invalid_argument("homogenization degree below polynomial degree");
    Integer r = 0;
    Integer bpow = 1;
    // Horner in a with the missing b powers folded in from the top.
    for (int i = degree(); i >= 0; --i) {
      r = r * a + c_[static_cast<std::size_t>(i)] * bpow;
      bpow *= b;
    }
    // r now equals sum c_i a^i b^(deg - i); pad up to D.
    if (D > degree() && degree() >= 0) r *= pow_int(b, static_cast<unsigned long>(D - degree()));
    return r;
  }

  Rational eval(const Rational& x) const {
    if (is_zero()) return 0;
    const Integer v = eval_homogeneous(x.get_num(), x.get_den(), degree());
    Rational r(v, pow_int(x.get_den(), static_cast<unsigned long>(degree())));
    r.canonicalize();
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Integer> c_;
};

inline IntPoly pow(const IntPoly& p, unsigned e) {
  IntPoly r{1};
  IntPoly b = p;
  while (e) {
    if (e & 1u) r = r * b;
    e >>= 1u;
    if (e) b = b * b;
  }
  return r;
}

/// "3*z^2 - 2*z + 1"; parseable back by the expression parser.
inline std::string to_string(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const Integer& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    const bool neg = sgn(c) < 0;
    const Integer mag = abs(c);
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    const bool unit = (mag == 1);
    if (i == 0 || !unit) out += mag.get_str();
    if (i > 0) {
      if (!unit) out += "*";
      out += "z";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Content and primitive part

struct ContentPrimitive {
  Integer content;
  IntPoly primitive;
};

/// content > 0 and the primitive part keeps the sign of the leading coefficient.
inline ContentPrimitive content_primitive(const IntPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no content decomposition");
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return {g, g == 1 ? p : p.divexact(g)};
}

inline Integer content(const IntPoly& p) { return content_primitive(p).content; }
inline IntPoly primitive_part(const IntPoly& p) { return content_primitive(p).primitive; }

/// Primitive with positive leading coefficient; the canonical divisor representative.
inline IntPoly normalize_positive(const IntPoly& p) {
  IntPoly r = primitive_part(p);
  return sgn(r.lc()) < 0 ? -r : r;
}

// ---------------------------------------------------------------------------
// Division

/// lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-division by zero polynomial");
  if (a.degree() < b.degree()) return a;
  std::vector<Integer> r(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const Integer& lb = b.lc();
  int dr = a.degree();
  int steps = a.degree() - db + 1;
  auto bc = b.coeffs();
  while (dr >= db && dr >= 0) {
    const Integer q = r[static_cast<std::size_t>(dr)];
    for (int i = 0; i < dr; ++i) r[static_cast<std::size_t>(i)] *= lb;
    r[static_cast<std::size_t>(dr)] = 0;
    const int shift = dr - db;
    for (int i = 0; i < db; ++i)
      mpz_submul(r[static_cast<std::size_t>(i + shift)].get_mpz_t(), q.get_mpz_t(),
                 bc[static_cast<std::size_t>(i)].get_mpz_t());
    --steps;
    while (dr >= 0 && sgn(r[static_cast<std::size_t>(dr)]) == 0) --dr;
  }
  IntPoly rem(std::move(r));
  if (steps > 0) rem *= pow_int(lb, static_cast<unsigned long>(steps));
  return rem;
}

/// a / b in Z[z]; throws unless b divides a with integral quotient.
inline IntPoly divexact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  if (a.degree() < b.degree()) throw std::domain_error("inexact polynomial division");
  std::vector<Integer> r(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  std::vector<Integer> q(static_cast<std::size_t>(a.degree() - db + 1));
  auto bc = b.coeffs();
  for (int k = a.degree() - db; k >= 0; --k) {
    Integer& top = r[static_cast<std::size_t>(k + db)];
    if (sgn(top) == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.lc().get_mpz_t()))
      throw std::domain_error("inexact polynomial division");
    Integer t;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), b.lc().get_mpz_t());
    for (int i = 0; i <= db; ++i)
      mpz_submul(r[static_cast<std::size_t>(k + i)].get_mpz_t(), t.get_mpz_t(),
                 bc[static_cast<std::size_t>(i)].get_mpz_t());
    q[static_cast<std::size_t>(k)] = std::move(t);
  }
  for (const auto& v : r)
    if (sgn(v) != 0) throw std::domain_error("inexact polynomial division");
  return IntPoly(std::move(q));
}

/// True iff b divides a in Q[z].
inline bool divides(const IntPoly& b, const IntPoly& a) {
  if (b.is_zero()) return a.is_zero();
  if (a.is_zero()) return true;
  return pseudo_remainder(a, b).is_zero();
}

// ---------------------------------------------------------------------------
// Subresultant GCD and resultant

namespace detail {

/// h^(1-delta) * g^delta, which is integral along a subresultant sequence.
inline Integer subres_next_h(const Integer& h, const Integer& g, int delta) {
  const Integer gd = pow_int(g, static_cast<unsigned long>(delta));
  if (delta == 0) return h;
  Integer den = pow_int(h, static_cast<unsigned long>(delta - 1));
  Integer r;
  mpz_divexact(r.get_mpz_t(), gd.get_mpz_t(), den.get_mpz_t());
  return r;
}

}  // namespace detail

/// gcd over Z[z], content gcd included, positive leading coefficient.
inline IntPoly gcd_poly(IntPoly u, IntPoly v) {
  if (u.is_zero() && v.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
  if (u.is_zero()) return sgn(v.lc()) < 0 ? -v : v;
  if (v.is_zero()) return sgn(u.lc()) < 0 ? -u : u;
  if (u.degree() < v.degree()) std::swap(u, v);
  auto [cu, pu] = content_primitive(u);
  auto [cv, pv] = content_primitive(v);
  Integer d;
  mpz_gcd(d.get_mpz_t(), cu.get_mpz_t(), cv.get_mpz_t());
  u = std::move(pu);
  v = std::move(pv);
  Integer g = 1, h = 1;
  for (;;) {
    const int delta = u.degree() - v.degree();
    IntPoly r = pseudo_remainder(u, v);
    if (r.is_zero()) {
      IntPoly out = primitive_part(v) * d;
      return sgn(out.lc()) < 0 ? -out : out;
    }
    if (r.degree() == 0) return IntPoly::constant(d);
    u = std::move(v);
    v = r.divexact(g * pow_int(h, static_cast<unsigned long>(delta)));
    g = u.lc();
    h = detail::subres_next_h(h, g, delta);
  }
}

/// Res(p, q) = lc(p)^deg q * prod q(alpha) over roots alpha of p (Sylvester sign).
inline Integer resultant(IntPoly a, IntPoly b) {
  if (a.is_zero() || b.is_zero()) throw std::invalid_argument("resultant of zero polynomial");
  int sign = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
  }
  auto [ca, pa] = content_primitive(a);
  auto [cb, pb] = content_primitive(b);
  const Integer t = pow_int(ca, static_cast<unsigned long>(b.degree())) *
                    pow_int(cb, static_cast<unsigned long>(a.degree()));
  a = std::move(pa);
  b = std::move(pb);
  Integer g = 1, h = 1;
  while (b.degree() > 0) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) sign = -sign;
    IntPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return 0;
    b = r.divexact(g * pow_int(h, static_cast<unsigned long>(delta)));
    g = a.lc();
    h = detail::subres_next_h(h, g, delta);
  }
  // b is a nonzero constant here.
  const int da = a.degree();
  Integer hb;
  if (da == 0) {
    hb = 1;
  } else {
    const Integer num = pow_int(b.lc(), static_cast<unsigned long>(da));
    const Integer den = pow_int(h, static_cast<unsigned long>(da - 1));
    mpz_divexact(hb.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return sign * t * hb;
}

// ---------------------------------------------------------------------------
// Squarefree reduction

namespace detail {

using ModPoly = std::vector<std::uint64_t>;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a, q))
    if (e & 1) r = mulmod(r, a, q);
  return r;
}

inline void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// a mod b over F_q, b nonzero.
inline void rem_mod(ModPoly& a, const ModPoly& b, std::uint64_t q) {
  const std::uint64_t inv = powmod(b.back(), q - 2, q);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t c = mulmod(a.back(), inv, q);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i < db; ++i) {
      const std::uint64_t t = mulmod(c, b[i], q);
      a[i + shift] = a[i + shift] >= t ? a[i + shift] - t : a[i + shift] + (q - t);
    }
    a.pop_back();
    trim(a);
  }
}

inline std::size_t gcd_degree_mod(ModPoly a, ModPoly b, std::uint64_t q) {
  while (!b.empty()) {
    rem_mod(a, b, q);
    std::swap(a, b);
  }
  return a.size() - 1;
}

/// Primes just above 2^62, fixed so results do not depend on run order.
inline const std::vector<std::uint64_t>& certificate_primes() {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<std::uint64_t> v;
    mpz_class x = mpz_class(1) << 62;
    for (int i = 0; i < 3; ++i) {
      mpz_nextprime(x.get_mpz_t(), x.get_mpz_t());
      v.push_back(mpz_get_ui(x.get_mpz_t()));
    }
    return v;
  }();
  return primes;
}

}  // namespace detail

/// Sufficient test: p mod q keeps its degree and is squarefree for some prime q.
inline bool certainly_squarefree(const IntPoly& p) {
  if (p.degree() <= 1) return true;
  for (const std::uint64_t q : detail::certificate_primes()) {
    if (mpz_fdiv_ui(p.lc().get_mpz_t(), q) == 0) continue;
    detail::ModPoly a, da;
    for (const auto& c : p.coeffs()) a.push_back(mpz_fdiv_ui(c.get_mpz_t(), q));
    for (std::size_t i = 1; i < a.size(); ++i) da.push_back(detail::mulmod(a[i], i % q, q));
    detail::trim(da);
    if (detail::gcd_degree_mod(std::move(a), std::move(da), q) == 0) return true;
  }
  return false;
}

/// Same distinct roots as p, each simple; primitive with positive lc.
inline IntPoly squarefree_part(const IntPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no squarefree part");
  if (p.degree() == 0) return IntPoly{1};
  const IntPoly pp = primitive_part(p);
  if (certainly_squarefree(pp)) return normalize_positive(pp);
  const IntPoly g = gcd_poly(pp, pp.derivative());
  if (g.degree() == 0) return normalize_positive(pp);
  return normalize_positive(divexact(pp, primitive_part(g)));
}

/// Layers s_1, s_2, ... where s_j carries exactly the roots of multiplicity >= j.
inline std::vector<IntPoly> squarefree_layers(const IntPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no squarefree part");
  std::vector<IntPoly> layers;
  IntPoly rest = primitive_part(p);
  while (rest.degree() > 0) {
    IntPoly s = squarefree_part(rest);
    rest = primitive_part(divexact(rest, s));
    layers.push_back(std::move(s));
  }
  return layers;
}

// ---------------------------------------------------------------------------
// Homogenized substitution

/// sum_i p_i f^i g^(D-i).
inline IntPoly compose_fraction(const IntPoly& p, const IntPoly& f, const IntPoly& g, int D) {
  if (D < p.degree()) throw std::invalid_argument("homogenization degree below polynomial degree");
  if (f.is_zero() && g.is_zero()) throw std::invalid_argument("substitution pair is zero");
  if (p.is_zero()) return {};
  const int k = p.degree();
  std::vector<IntPoly> gpow(static_cast<std::size_t>(k) + 1);
  gpow[0] = IntPoly{1};
  for (int i = 1; i <= k; ++i) gpow[static_cast<std::size_t>(i)] = gpow[static_cast<std::size_t>(i) - 1] * g;
  IntPoly r = IntPoly::constant(p.lc());
  for (int i = k - 1; i >= 0; --i) {
    r = r * f;
    const Integer& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (sgn(c) != 0) r += gpow[static_cast<std::size_t>(k - i)] * c;
  }
  if (D > k) r = r * pow(g, static_cast<unsigned>(D - k));
  return r;
}

/// Ordinary composition p(f(z)).
inline IntPoly compose(const IntPoly& p, const IntPoly& f) {
  if (p.is_zero()) return {};
  return compose_fraction(p, f, IntPoly{1}, p.degree());
}

}  // namespace corrdyn
