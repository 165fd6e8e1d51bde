#pragma once

// Seeded random inputs for the property tests.

#include <random>
#include <vector>

#include "corrdyn/maps.hpp"
#include "corrdyn/polyarith.hpp"

namespace corrdyn::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// Degree exactly `deg` (nonzero leading coefficient), coefficients in [-bound, bound].
inline IntPoly random_poly(Rng& rng, int deg, long bound) {
  std::vector<Integer> c(static_cast<std::size_t>(deg) + 1);
  for (auto& v : c) v = uniform(rng, -bound, bound);
  while (sgn(c.back()) == 0) c.back() = uniform(rng, -bound, bound);
  return IntPoly(std::move(c));
}

inline IntPoly random_nonzero_poly(Rng& rng, int max_deg, long bound) {
  return random_poly(rng, static_cast<int>(uniform(rng, 0, max_deg)), bound);
}

/// Non-constant map of degree between 1 and max_deg after reduction.
inline RationalMap random_map(Rng& rng, int max_deg, long bound, bool polynomial = false) {
  for (;;) {
    const int d = static_cast<int>(uniform(rng, 1, max_deg));
    IntPoly f, g;
    if (polynomial) {
      f = random_poly(rng, d, bound);
      g = IntPoly{1};
    } else if (uniform(rng, 0, 1)) {
      f = random_poly(rng, d, bound);
      g = random_poly(rng, static_cast<int>(uniform(rng, 0, d)), bound);
    } else {
      g = random_poly(rng, d, bound);
      f = random_poly(rng, static_cast<int>(uniform(rng, 0, d)), bound);
    }
    try {
      return make_map(f, g);
    } catch (const std::invalid_argument&) {
    }
  }
}

/// Map of degree exactly d.
inline RationalMap random_map_of_degree(Rng& rng, int d, long bound, bool polynomial = false) {
  for (;;) {
    const RationalMap R = random_map(rng, d, bound, polynomial);
    if (R.degree() == d) return R;
  }
}

inline ProjPoint random_rational(Rng& rng, long bound) {
  return ProjPoint(Rational(Integer(uniform(rng, -bound, bound)), Integer(uniform(rng, 1, bound))));
}

/// A set of exactly `card` points mixing rational points, conjugate pairs
/// from quadratic factors and occasionally infinity.
inline AlgSet random_set(Rng& rng, int card, long bound, bool allow_infinity = true) {
  for (;;) {
    IntPoly p{1};
    bool inf = false;
    int remaining = card;
    if (allow_infinity && remaining > 0 && uniform(rng, 0, 4) == 0) {
      inf = true;
      --remaining;
    }
    while (remaining > 0) {
      if (remaining >= 2 && uniform(rng, 0, 2) == 0) {
        p = p * random_poly(rng, 2, bound);
        remaining -= 2;
      } else {
        const ProjPoint x = random_rational(rng, bound);
        p = p * IntPoly::linear_root(x.value().get_num(), x.value().get_den());
        remaining -= 1;
      }
    }
    AlgSet s = AlgSet::from_poly(p, inf);
    if (s.cardinality() == card) return s;
  }
}

}  // namespace corrdyn::testing
