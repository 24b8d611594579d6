#pragma once

#include <gmpxx.h>

#include <string>

#include "sheafcalc/errors.hpp"

namespace sheafcalc {

/// Exact scalar for every rank/kernel/cokernel computation. Backed by GMP so
/// entries like the pivots of a long elimination never overflow or round.
using Rational = mpq_class;

/// Parses "p/q" or "p" with optional sign. Rejects anything else, in
/// particular decimal floats, which are not exact input.
inline Rational rational_from_string(const std::string& text) {
  if (text.empty()) fail(ErrorCode::ParseError, "empty rational literal");
  auto is_plain_int = [](const std::string& s) {
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_plain_int(text))
      fail(ErrorCode::ParseError, "bad rational literal '" + text + "'");
  } else {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_plain_int(num) || !is_plain_int(den) || den == "0")
      fail(ErrorCode::ParseError, "bad rational literal '" + text + "'");
  }
  Rational value;
  if (value.set_str(text, 10) != 0)
    fail(ErrorCode::ParseError, "bad rational literal '" + text + "'");
  value.canonicalize();
  return value;
}

inline std::string rational_to_string(const Rational& value) {
  return value.get_str();
}

inline double rational_to_double(const Rational& value) { return value.get_d(); }

/// Exact: every IEEE double is a dyadic rational.
inline Rational rational_from_double(double value) { return Rational(value); }

}  // namespace sheafcalc
