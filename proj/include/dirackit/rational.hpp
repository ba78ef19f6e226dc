#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace dirackit {

// Exact rational scalar. All arithmetic in the toolkit is tolerance-free;
// mpq_class keeps values in canonical reduced form with positive denominator.
using Scalar = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p", "-p" or "p/q". Throws ParseError on malformed input or q == 0.
inline Scalar parse_scalar(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  for (char ch : text) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
      throw ParseError("bad character in rational literal '" + text + "'");
  }
  mpq_class value;
  if (value.set_str(text, 10) != 0) throw ParseError("unparsable rational '" + text + "'");
  if (value.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
  value.canonicalize();
  return value;
}

inline std::string scalar_str(const Scalar& s) { return s.get_str(); }

// True iff s is the square of a rational. Used when comparing quadratic
// forms up to square factors.
inline bool is_rational_square(const Scalar& s) {
  if (s < 0) return false;
  return mpz_perfect_square_p(s.get_num().get_mpz_t()) &&
         mpz_perfect_square_p(s.get_den().get_mpz_t());
}

}  // namespace dirackit
