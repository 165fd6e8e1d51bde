#pragma once

// The correspondence H(z) = B(A^{-1}(z)) on P^1: exact orbits of finite sets,
// the cardinality growth bound, height trajectories along orbits, inclusion
// and equality checks for A^{-1}(K1) vs B^{-1}(K2), the invariant sets coming
// from identities F o A = F o B, and a numeric engine for complex orbits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/heights.hpp"
#include "corrdyn/maps.hpp"
#include "corrdyn/parallel.hpp"
#include "corrdyn/polyarith.hpp"
#include "corrdyn/roots.hpp"

namespace corrdyn {

struct Correspondence {
  RationalMap A;
  RationalMap B;
  int n() const { return A.degree(); }
  int m() const { return B.degree(); }
};

/// H(S) = B(A^{-1}(S)).
inline AlgSet corr_step(const Correspondence& C, const AlgSet& S, const ExecOptions& exec = {}) {
  return pushforward_set(C.B, pullback_set(C.A, S), exec);
}

// ---------------------------------------------------------------------------
// Functoriality constants for the pair (A, B)

struct CorrespondenceConstant {
  FunctorialityEstimate for_a;
  FunctorialityEstimate for_b;
  /// (m/n) c_A + c_B before inflation.
  double combined = 0;
  double slack = 1;
  /// combined * slack; the value used in every bound.
  double c_hat = 0;
};

/// Rationals of height <= log 50 plus infinity.
inline const std::vector<ProjPoint>& default_sample_grid() {
  static const std::vector<ProjPoint> grid = enumerate_rational_points(std::log(50.0));
  return grid;
}

inline CorrespondenceConstant estimate_correspondence_constant(const Correspondence& C,
                                                               const std::vector<ProjPoint>& extra_samples,
                                                               double slack) {
  std::vector<ProjPoint> samples = default_sample_grid();
  samples.insert(samples.end(), extra_samples.begin(), extra_samples.end());
  CorrespondenceConstant out{estimate_functorial_constant(C.A, samples), estimate_functorial_constant(C.B, samples)};
  out.combined = static_cast<double>(C.m()) / C.n() * out.for_a.c_hat + out.for_b.c_hat;
  out.slack = slack;
  out.c_hat = out.combined * slack;
  return out;
}

// ---------------------------------------------------------------------------
// Exact orbits

enum class OrbitStatus { completed, degree_limit };

inline const char* to_string(OrbitStatus s) { return s == OrbitStatus::completed ? "completed" : "degree_limit"; }

struct OrbitOptions {
  /// Abort before a step whose unreduced pullback form would exceed this degree.
  long degree_limit = 5000;
  bool compute_heights = true;
  double c_hat_slack = 1.5;
  /// Orbit sets up to this size are scanned for rational points to extend the
  /// constant-estimation grid.
  int rational_scan_limit = 64;
  MahlerOptions mahler{};
  ExecOptions exec{};
};

struct OrbitRecord {
  int step = 0;
  AlgSet set;
  int cardinality = 0;
  /// Degree of the pullback form before squarefree reduction (|K| at step 0).
  long raw_degree = 0;
  std::optional<HeightValue> total_height;
  std::optional<double> avg_height;
  /// ceil((n(|prev| - 2) + 2) / m); absent at step 0.
  std::optional<long> growth_lower_bound;
  /// m |H(S)| >= n(|S| - 2) + 2 exactly; true at step 0.
  bool if_holds = true;
  /// M0 + C/(1 - m/n) with M0 the average height at step 0; only when n > m.
  std::optional<double> fu_upper_bound;
};

struct OrbitResult {
  std::vector<OrbitRecord> records;
  OrbitStatus status = OrbitStatus::completed;
  std::optional<CorrespondenceConstant> constant;
};

inline long ceil_div(long a, long b) {
  const long q = a / b, r = a % b;
  return (r != 0 && ((r > 0) == (b > 0))) ? q + 1 : q;
}

/// H^k(K) for k = 0..k_max with cardinalities, heights and the bounds they
/// are checked against.
inline OrbitResult orbit(const Correspondence& C, const AlgSet& K, int k_max, const OrbitOptions& opt = {}) {
  if (K.empty()) throw std::invalid_argument("orbit of the empty set");
  if (k_max < 1) throw std::invalid_argument("orbit needs at least one step");
  const long n = C.n(), m = C.m();
  OrbitResult out;
  {
    OrbitRecord r0;
    r0.set = K;
    r0.cardinality = K.cardinality();
    r0.raw_degree = K.cardinality();
    out.records.push_back(std::move(r0));
  }
  for (int k = 1; k <= k_max; ++k) {
    const OrbitRecord& prev = out.records.back();
    const long raw = pullback_raw_degree(C.A, prev.set);
    if (raw > opt.degree_limit) {
      out.status = OrbitStatus::degree_limit;
      break;
    }
    OrbitRecord r;
    r.step = k;
    r.set = corr_step(C, prev.set, opt.exec);
    r.cardinality = r.set.cardinality();
    r.raw_degree = raw;
    const long numer = n * (prev.cardinality - 2) + 2;
    r.growth_lower_bound = ceil_div(numer, m);
    r.if_holds = m * r.cardinality >= numer;
    out.records.push_back(std::move(r));
  }
  if (!opt.compute_heights) return out;

  std::vector<ProjPoint> seen;
  for (auto& r : out.records) {
    const SetHeight h = total_height(r.set, opt.mahler);
    r.total_height = h.total;
    r.avg_height = h.average;
    if (r.set.cardinality() <= opt.rational_scan_limit) {
      const auto pts = rational_points(r.set);
      seen.insert(seen.end(), pts.begin(), pts.end());
    }
  }
  if (n > m) {
    out.constant = estimate_correspondence_constant(C, seen, opt.c_hat_slack);
    const double bound = *out.records.front().avg_height +
                         out.constant->c_hat / (1.0 - static_cast<double>(m) / static_cast<double>(n));
    for (auto& r : out.records) r.fu_upper_bound = bound;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cardinality growth

struct GrowthStep {
  int step = 0;
  int previous = 0;
  int cardinality = 0;
  /// n(|S| - 2) + 2, compared against m |H(S)|.
  long if_numerator = 0;
  bool if_holds = false;
  bool strictly_grows = false;
};

struct GrowthReport {
  int n = 0, m = 0;
  /// (2n - 2)/(n - m).
  Rational threshold;
  bool exceeds_threshold = false;
  std::vector<GrowthStep> steps;
  OrbitStatus status = OrbitStatus::completed;
  bool verdict = false;
};

inline GrowthReport growth_check(const Correspondence& C, const AlgSet& K, int steps, const OrbitOptions& opt = {}) {
  const int n = C.n(), m = C.m();
  if (n <= m) throw std::invalid_argument("growth lemma requires deg A > deg B");
  GrowthReport rep;
  rep.n = n;
  rep.m = m;
  rep.threshold = Rational(2 * n - 2, n - m);
  rep.threshold.canonicalize();
  rep.exceeds_threshold = Rational(K.cardinality()) > rep.threshold;
  OrbitOptions o = opt;
  o.compute_heights = false;
  const OrbitResult orb = orbit(C, K, steps, o);
  rep.status = orb.status;
  bool all = true;
  for (std::size_t i = 1; i < orb.records.size(); ++i) {
    const auto& prev = orb.records[i - 1];
    const auto& cur = orb.records[i];
    GrowthStep g;
    g.step = cur.step;
    g.previous = prev.cardinality;
    g.cardinality = cur.cardinality;
    g.if_numerator = static_cast<long>(n) * (prev.cardinality - 2) + 2;
    g.if_holds = static_cast<long>(m) * cur.cardinality >= g.if_numerator;
    g.strictly_grows = cur.cardinality > prev.cardinality;
    all = all && g.if_holds && g.strictly_grows;
    rep.steps.push_back(g);
  }
  rep.verdict = all && rep.status == OrbitStatus::completed;
  return rep;
}

// ---------------------------------------------------------------------------
// Height trajectories

struct HeightStep {
  int step = 0;
  int cardinality = 0;
  double total = 0;
  double average = 0;
  bool fu_holds = true;
  /// (m/n) avg_{k-1} -/+ C; absent at step 0.
  std::optional<double> bew_lower, bew_upper;
  bool bew_holds = true;
};

struct HeightReport {
  int n = 0, m = 0;
  CorrespondenceConstant constant;
  double m0 = 0;
  double fu_bound = 0;
  std::vector<HeightStep> steps;
  bool all_fu_hold = true;
  bool all_bew_hold = true;
  OrbitStatus status = OrbitStatus::completed;
};

/// Average heights along the orbit against the averaged forms of the one-step
/// band (m/n) h -/+ C and the accumulated bound M0 + C/(1 - m/n).
inline HeightReport height_trajectory(const Correspondence& C, const AlgSet& K, int k_max, double c_hat_slack,
                                      const OrbitOptions& opt = {}) {
  if (C.n() <= C.m()) throw std::invalid_argument("height trajectory requires deg A > deg B");
  OrbitOptions o = opt;
  o.compute_heights = true;
  o.c_hat_slack = c_hat_slack;
  const OrbitResult orb = orbit(C, K, k_max, o);
  HeightReport rep;
  rep.n = C.n();
  rep.m = C.m();
  rep.constant = *orb.constant;
  rep.status = orb.status;
  rep.m0 = *orb.records.front().avg_height;
  rep.fu_bound = *orb.records.front().fu_upper_bound;
  const double ratio = static_cast<double>(rep.m) / rep.n;
  // Rounding allowance for comparisons that are equalities when C = 0.
  constexpr double eps = 1e-9;
  for (std::size_t i = 0; i < orb.records.size(); ++i) {
    const auto& r = orb.records[i];
    HeightStep s;
    s.step = r.step;
    s.cardinality = r.cardinality;
    s.total = r.total_height->value;
    s.average = *r.avg_height;
    s.fu_holds = s.average <= rep.fu_bound + eps;
    if (i > 0) {
      const double centre = ratio * *orb.records[i - 1].avg_height;
      s.bew_lower = centre - rep.constant.c_hat;
      s.bew_upper = centre + rep.constant.c_hat;
      s.bew_holds = *s.bew_lower - eps <= s.average && s.average <= *s.bew_upper + eps;
    }
    rep.all_fu_hold = rep.all_fu_hold && s.fu_holds;
    rep.all_bew_hold = rep.all_bew_hold && s.bew_holds;
    rep.steps.push_back(s);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Inclusion, equality and identity-induced invariant sets

struct InclusionResult {
  bool holds = false;
  AlgSet lhs;  // A^{-1}(K1)
  AlgSet rhs;  // B^{-1}(K2)
  /// lhs \ rhs when the inclusion fails.
  std::optional<AlgSet> witness;
};

/// A^{-1}(K1) subset of B^{-1}(K2), decided by exact divisibility.
inline InclusionResult inclusion_check(const RationalMap& A, const RationalMap& B, const AlgSet& K1,
                                       const AlgSet& K2) {
  InclusionResult r;
  r.lhs = pullback_set(A, K1);
  r.rhs = pullback_set(B, K2);
  r.holds = is_subset(r.lhs, r.rhs);
  if (!r.holds) r.witness = set_difference(r.lhs, r.rhs);
  return r;
}

struct EqualityResult {
  InclusionResult forward;   // A^{-1}(K1) in B^{-1}(K2)
  InclusionResult backward;  // B^{-1}(K2) in A^{-1}(K1)
  bool holds = false;
};

inline EqualityResult equality_check(const RationalMap& A, const RationalMap& B, const AlgSet& K1, const AlgSet& K2) {
  EqualityResult r;
  r.forward = inclusion_check(A, B, K1, K2);
  r.backward = inclusion_check(B, A, K2, K1);
  r.holds = r.forward.holds && r.backward.holds;
  return r;
}

class IdentityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct IdentityInvariant {
  AlgSet K;
  bool verified = false;
  EqualityResult check;
};

/// K = F^{-1}(K_hat), which satisfies A^{-1}(K) = B^{-1}(K) whenever F o A = F o B.
inline IdentityInvariant invariant_from_identity(const RationalMap& F, const RationalMap& A, const RationalMap& B,
                                                 const AlgSet& K_hat) {
  const RationalMap FA = compose_maps(F, A), FB = compose_maps(F, B);
  if (!maps_equal(FA, FB))
    throw IdentityError("F o A = " + to_string(FA) + " differs from F o B = " + to_string(FB));
  IdentityInvariant out;
  out.K = pullback_set(F, K_hat);
  out.check = equality_check(A, B, out.K, out.K);
  out.verified = out.check.holds;
  return out;
}

/// A = z^2, B = (z + 1)^2 and K = {0, 1, 4, ..., N^2}: the truncation of a
/// family with A^{-1}(K) = B^{-1}(K) = Z. The finite cut breaks the inclusion
/// exactly at z = N.
struct SquaresExample {
  int N = 0;
  AlgSet K;
  InclusionResult inclusion;
  /// A^{-1}(K) with N removed.
  AlgSet trimmed_lhs;
  bool trimmed_holds = false;
};

inline SquaresExample squares_example(int N) {
  if (N < 1) throw std::invalid_argument("truncation size must be positive");
  std::vector<ProjPoint> pts;
  for (long i = 0; i <= N; ++i) pts.emplace_back(i * i);
  SquaresExample ex;
  ex.N = N;
  ex.K = AlgSet::from_points(pts);
  const RationalMap A = make_polynomial_map(IntPoly{0, 0, 1});
  const RationalMap B = make_polynomial_map(IntPoly{1, 2, 1});
  ex.inclusion = inclusion_check(A, B, ex.K, ex.K);
  ex.trimmed_lhs = set_difference(ex.inclusion.lhs, AlgSet::from_points({ProjPoint(N)}));
  ex.trimmed_holds = is_subset(ex.trimmed_lhs, ex.inclusion.rhs);
  return ex;
}

// ---------------------------------------------------------------------------
// Numeric complex orbits

struct NumericPointSet {
  std::vector<MpComplex> points;
  bool has_infinity = false;
  double dedup_tolerance = 1e-12;
  /// +inf with fewer than two finite points.
  double min_pairwise_distance = std::numeric_limits<double>::infinity();

  int cardinality() const { return static_cast<int>(points.size()) + (has_infinity ? 1 : 0); }
};

namespace detail {

inline bool numerically_equal(const MpComplex& a, const MpComplex& b, double tol) {
  const double scale = std::max({1.0, abs(a).to_double(), abs(b).to_double()});
  return abs(a - b).to_double() <= tol * scale;
}

}  // namespace detail

/// Merges points closer than tol * max(1, |x|, |y|), orders by (re, im) and
/// records the minimum pairwise distance.
inline NumericPointSet make_numeric_set(std::vector<MpComplex> pts, bool has_infinity, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("dedup tolerance must be positive");
  std::sort(pts.begin(), pts.end(), [](const MpComplex& a, const MpComplex& b) {
    if (!(a.re == b.re)) return a.re < b.re;
    return a.im < b.im;
  });
  NumericPointSet s;
  s.has_infinity = has_infinity;
  s.dedup_tolerance = tol;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : s.points)
      if (detail::numerically_equal(p, q, tol)) {
        dup = true;
        break;
      }
    if (!dup) s.points.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < s.points.size(); ++i)
    for (std::size_t j = i + 1; j < s.points.size(); ++j)
      s.min_pairwise_distance = std::min(s.min_pairwise_distance, abs(s.points[i] - s.points[j]).to_double());
  return s;
}

struct NumericOptions {
  long precision_bits = 128;
  double dedup_tolerance = 1e-12;
  ExecOptions exec{};
};

struct NumericStep {
  int step = 0;
  NumericPointSet set;
  /// Sum of log max(1, |z|) over the finite points.
  double logmax_total = 0;
  double min_pairwise_distance = std::numeric_limits<double>::infinity();
};

struct NumericOrbit {
  std::vector<NumericStep> steps;
  /// A or B is not a polynomial; results are computed but outside the
  /// discrete-set regime the engine is meant for.
  bool general_rational = false;
  long precision_bits = 0;
};

namespace detail {

inline MpComplex to_complex(const ProjPoint& x, mpfr_prec_t prec) {
  return {BigFloat(x.value(), prec), BigFloat(prec)};
}

inline MpComplex eval_poly(const IntPoly& p, const MpComplex& x) {
  const mpfr_prec_t prec = x.prec();
  MpComplex acc(prec);
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * x;
    mpfr_add_z(acc.re.get(), acc.re.get(), p.coeffs()[static_cast<std::size_t>(i)].get_mpz_t(), MPFR_RNDN);
  }
  return acc;
}

/// log of max_i |p_i| |x|^i, the scale against which cancellation in p(x) is judged.
inline double log_term_scale(const IntPoly& p, const MpComplex& x) {
  const double lx = log_abs(x);
  double best = -INFINITY;
  for (int i = 0; i <= p.degree(); ++i) {
    const Integer& c = p.coeffs()[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    best = std::max(best, corrdyn::log_abs(c) + (i == 0 ? 0.0 : i * lx));
  }
  return best;
}

inline double cancellation_cutoff(mpfr_prec_t prec) { return 0.75 * static_cast<double>(prec) * std::log(2.0); }

/// Finite points of F^{-1}(s) and whether infinity belongs to it.
inline std::pair<std::vector<MpComplex>, bool> numeric_preimage(const RationalMap& F, const MpComplex& s,
                                                                mpfr_prec_t prec) {
  const int d = F.degree();
  std::vector<MpComplex> coeffs;
  coeffs.reserve(static_cast<std::size_t>(d) + 1);
  std::vector<double> scale;
  const double ls = log_abs(s);
  for (int i = 0; i <= d; ++i) {
    const Integer& g = F.den().coeff(static_cast<std::size_t>(i));
    const Integer& f = F.num().coeff(static_cast<std::size_t>(i));
    MpComplex c = s * BigFloat(Integer(-g), prec);
    mpfr_add_z(c.re.get(), c.re.get(), f.get_mpz_t(), MPFR_RNDN);
    scale.push_back(std::max(sgn(f) ? corrdyn::log_abs(f) : -INFINITY, sgn(g) ? corrdyn::log_abs(g) + ls : -INFINITY));
    coeffs.push_back(std::move(c));
  }
  // A top coefficient that cancels to zero means infinity is one of the preimages.
  bool inf = false;
  while (coeffs.size() > 1 && (scale.back() == -INFINITY ||
                               log_abs(coeffs.back()) < scale.back() - cancellation_cutoff(prec))) {
    coeffs.pop_back();
    scale.pop_back();
    inf = true;
  }
  if (coeffs.size() == 1) return {{}, inf};
  return {aberth_roots(coeffs, {prec, 0}), inf};
}

inline std::pair<std::vector<MpComplex>, bool> numeric_preimage_of_infinity(const RationalMap& F, mpfr_prec_t prec) {
  std::vector<MpComplex> roots;
  if (F.den().degree() > 0) roots = integer_poly_roots(F.den(), prec);
  return {std::move(roots), F.num().degree() > F.den().degree()};
}

/// F(x), or nullopt for infinity.
inline std::optional<MpComplex> numeric_eval(const RationalMap& F, const MpComplex& x) {
  const MpComplex f = eval_poly(F.num(), x);
  const MpComplex g = eval_poly(F.den(), x);
  const double lg = log_abs(g);
  if (std::isinf(lg) || lg < log_term_scale(F.den(), x) - cancellation_cutoff(x.prec())) return std::nullopt;
  return f / g;
}

inline std::string describe(const MpComplex& z) { return z.re.str(17) + (z.im.sign() < 0 ? "" : "+") + z.im.str(17) + "i"; }

}  // namespace detail

inline NumericStep summarize_numeric(int step, NumericPointSet set) {
  NumericStep st;
  st.step = step;
  for (const auto& p : set.points) st.logmax_total += logmax_height(p).value;
  st.min_pairwise_distance = set.min_pairwise_distance;
  st.set = std::move(set);
  return st;
}

/// Iterates H on complex points: solve A(x) = s for every s, apply B, merge
/// coincident points.
inline NumericOrbit numeric_orbit(const Correspondence& C, const NumericPointSet& start, int k_max,
                                  const NumericOptions& opt = {}) {
  if (k_max < 0) throw std::invalid_argument("negative step count");
  const mpfr_prec_t prec = opt.precision_bits;
  NumericOrbit out;
  out.precision_bits = prec;
  out.general_rational = !C.A.is_polynomial() || !C.B.is_polynomial();
  const ProjPoint b_at_inf = eval_map(C.B, ProjPoint::infinity());

  std::vector<MpComplex> init;
  for (const auto& p : start.points) {
    MpComplex c(prec);
    mpfr_set(c.re.get(), p.re.get(), MPFR_RNDN);
    mpfr_set(c.im.get(), p.im.get(), MPFR_RNDN);
    init.push_back(std::move(c));
  }
  out.steps.push_back(summarize_numeric(0, make_numeric_set(std::move(init), start.has_infinity, opt.dedup_tolerance)));

  for (int k = 1; k <= k_max; ++k) {
    const NumericPointSet& cur = out.steps.back().set;
    const std::size_t count = cur.points.size();
    std::vector<std::vector<MpComplex>> images(count);
    std::vector<char> hits_inf(count, 0);
    parallel_for(count, opt.exec.threads, [&](std::size_t i) {
      std::pair<std::vector<MpComplex>, bool> pre;
      try {
        pre = detail::numeric_preimage(C.A, cur.points[i], prec);
      } catch (const RootFinderError& e) {
        throw RootFinderError(std::string(e.what()) + " (solving A(x) = " + detail::describe(cur.points[i]) + ")");
      }
      for (const auto& x : pre.first) {
        if (auto y = detail::numeric_eval(C.B, x)) images[i].push_back(std::move(*y));
        else hits_inf[i] = 1;
      }
      if (pre.second) {
        if (b_at_inf.is_infinity()) hits_inf[i] = 1;
        else images[i].push_back(detail::to_complex(b_at_inf, prec));
      }
    });
    std::vector<MpComplex> next;
    bool inf = false;
    for (std::size_t i = 0; i < count; ++i) {
      for (auto& y : images[i]) next.push_back(std::move(y));
      inf = inf || hits_inf[i];
    }
    if (cur.has_infinity) {
      auto [roots, with_inf] = detail::numeric_preimage_of_infinity(C.A, prec);
      for (const auto& x : roots) {
        if (auto y = detail::numeric_eval(C.B, x)) next.push_back(std::move(*y));
        else inf = true;
      }
      if (with_inf) {
        if (b_at_inf.is_infinity()) inf = true;
        else next.push_back(detail::to_complex(b_at_inf, prec));
      }
    }
    out.steps.push_back(summarize_numeric(k, make_numeric_set(std::move(next), inf, opt.dedup_tolerance)));
  }
  return out;
}

/// Numeric set from an exact one: roots of the defining polynomial, refined
/// until stable and rounded to the working precision.
inline NumericPointSet numeric_from_exact(const AlgSet& S, long precision_bits, double tol = 1e-12) {
  std::vector<MpComplex> pts;
  if (S.poly().degree() > 0) {
    for (const auto& r : stable_integer_poly_roots(S.poly(), precision_bits)) {
      MpComplex c(precision_bits);
      mpfr_set(c.re.get(), r.re.get(), MPFR_RNDN);
      mpfr_set(c.im.get(), r.im.get(), MPFR_RNDN);
      pts.push_back(std::move(c));
    }
  }
  return make_numeric_set(std::move(pts), S.has_infinity(), tol);
}

/// Same infinity flag, same size, and a one-to-one matching of points within
/// tol * max(1, |x|). Exact-side roots start at precision_bits and are refined
/// until stable.
inline bool numeric_matches_exact(const NumericPointSet& num, const AlgSet& exact, double tol,
                                  long precision_bits = 256) {
  if (num.has_infinity != exact.has_infinity()) return false;
  if (static_cast<int>(num.points.size()) != exact.finite_count()) return false;
  if (num.points.empty()) return true;
  const auto roots = stable_integer_poly_roots(exact.poly(), precision_bits);
  std::vector<char> used(roots.size(), 0);
  for (const auto& p : num.points) {
    std::size_t best = roots.size();
    double best_d = INFINITY;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = abs(p - roots[j]).to_double();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == roots.size()) return false;
    const double scale = std::max(1.0, abs(p).to_double());
    if (best_d > tol * scale) return false;
    used[best] = 1;
  }
  return true;
}

}  // namespace corrdyn
