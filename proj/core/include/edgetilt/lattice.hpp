#pragma once

#include <cstdint>
#include <vector>

#include "edgetilt/die.hpp"

namespace edgetilt {

struct SpanShift {
  std::int64_t span;   // largest b with all values congruent mod b
  std::int64_t shift;  // common residue, in [0, span)
};

SpanShift span_shift(const Die& d);

/// (x * y) mod m in [0, m), without overflow.
std::int64_t mul_mod(std::int64_t x, std::int64_t y, std::int64_t m);

struct CertificateTerm {
  std::int64_t value;
  std::int64_t coefficient;

  friend bool operator==(const CertificateTerm&, const CertificateTerm&) = default;
};

/// Span, shift and an integer certificate {c_x} with sum c_x = 0 and
/// sum c_x * x = span. `l1_norm` is sum |c_x| and `min_prob` is the
/// smallest probability among values carrying a nonzero coefficient.
struct LatticeStructure {
  std::int64_t span = 1;
  std::int64_t shift = 0;
  std::vector<CertificateTerm> certificate;
  std::int64_t l1_norm = 0;
  Rational min_prob;
};

/// Searches all certificates supported on two or three values with
/// |c_x| <= kMaxSearchCoefficient for the smallest l1 norm (ties go to the
/// larger min_prob), and falls back to an extended-gcd construction.
LatticeStructure certificate(const Die& d);

inline constexpr std::int64_t kMaxSearchCoefficient = 64;
// Above this many values only pairs and the gcd construction are tried.
inline constexpr std::size_t kMaxTripleSearchValues = 64;

/// True iff sum c = 0 and sum c * x = span exactly, every certificate value
/// is a value of `d`, and min_prob matches the support.
bool verify_certificate(const Die& d, const LatticeStructure& ls);

struct CfQuadratic {
  /// |f(t)| <= 1 - d_cert t^2 on [-pi, pi] for the span-normalized die.
  double d_cert;
  /// Scale-invariant form: |g(t)| <= 1 - r t^2 / 2 with g(t) = f(t / sigma).
  double r;
};

CfQuadratic cf_quadratic_coefficient(const LatticeStructure& ls, const MomentSet& ms);

}  // namespace edgetilt
