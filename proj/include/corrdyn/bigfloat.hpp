#pragma once

// Thin RAII layer over MPFR: a real type with per-object precision and a
// complex pair on top of it. Binary operators produce a value at the larger
// operand precision; the *_into helpers write into preallocated storage for
// inner loops.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

namespace corrdyn {

/// Working precision in bits when nothing else is requested. Overridable
/// through CORRDYN_PRECISION_BITS.
inline long default_precision_bits() {
  if (const char* env = std::getenv("CORRDYN_PRECISION_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 53 && v <= (1L << 20)) return v;
  }
  return 128;
}

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double d, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigFloat(const mpz_class& z, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  BigFloat(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Natural log as double; -inf for zero. Safe for magnitudes beyond double range.
  double log_abs() const {
    if (is_zero()) return -INFINITY;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
  }

  std::string str(int digits = 20) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  friend BigFloat abs(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat sqrt(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat log(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat exp(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec()));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

/// Multiprecision complex number; both parts share one precision.
struct MpComplex {
  BigFloat re;
  BigFloat im;

  explicit MpComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  MpComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  MpComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

  mpfr_prec_t prec() const { return re.prec(); }

  friend MpComplex operator+(const MpComplex& a, const MpComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend MpComplex operator-(const MpComplex& a, const MpComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend MpComplex operator*(const MpComplex& a, const MpComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend MpComplex operator/(const MpComplex& a, const MpComplex& b) {
    const BigFloat den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  friend MpComplex operator*(const MpComplex& a, const BigFloat& s) { return {a.re * s, a.im * s}; }

  friend BigFloat abs(const MpComplex& a) { return hypot(a.re, a.im); }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }
};

/// Scratch-based complex kernels; out must not alias the inputs.
namespace mpc_inplace {

/// out = a * b, using t as a temporary.
inline void mul(MpComplex& out, const MpComplex& a, const MpComplex& b, BigFloat& t) {
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(out.re.get(), out.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), out.im.get(), t.get(), MPFR_RNDN);
}

/// out = a / b.
inline void div(MpComplex& out, const MpComplex& a, const MpComplex& b, BigFloat& t, BigFloat& den) {
  mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), den.get(), t.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.re.get(), out.re.get(), t.get(), MPFR_RNDN);
  mpfr_div(out.re.get(), out.re.get(), den.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(out.im.get(), out.im.get(), t.get(), MPFR_RNDN);
  mpfr_div(out.im.get(), out.im.get(), den.get(), MPFR_RNDN);
}

inline void add(MpComplex& out, const MpComplex& a, const MpComplex& b) {
  mpfr_add(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

inline void sub(MpComplex& out, const MpComplex& a, const MpComplex& b) {
  mpfr_sub(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

inline void set(MpComplex& out, const MpComplex& a) {
  mpfr_set(out.re.get(), a.re.get(), MPFR_RNDN);
  mpfr_set(out.im.get(), a.im.get(), MPFR_RNDN);
}

}  // namespace mpc_inplace

}  // namespace corrdyn
