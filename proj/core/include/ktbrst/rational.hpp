#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ktbrst {

// Exact arbitrary-precision rational coefficients. Every identity the engine
// checks is exact, so there is no floating-point mode anywhere.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string str(const Rational& q) { return q.get_str(); }

inline Rational rational_from_string(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + text);
  if (q.get_den() == 0)
    throw std::invalid_argument("rational with zero denominator: " + text);
  q.canonicalize();
  return q;
}

}  // namespace ktbrst
