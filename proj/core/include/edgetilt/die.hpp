#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace edgetilt {

using Rational = mpq_class;
using BigInt = mpz_class;

struct Outcome {
  std::int64_t value;
  Rational prob;

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.value == b.value && a.prob == b.prob;
  }
};

/// A bounded integer-valued random variable with exact rational
/// probabilities. Values are strictly increasing, probabilities are
/// positive and sum to exactly one, and there are at least two values.
/// Immutable once constructed.
class Die {
 public:
  /// Validates and normalizes: sorts by value and merges repeated values.
  /// Outcomes with probability zero are dropped. Throws Error(kInvalidDie).
  static Die from_outcomes(std::vector<Outcome> outcomes);

  std::span<const Outcome> outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  std::int64_t min_value() const { return outcomes_.front().value; }
  std::int64_t max_value() const { return outcomes_.back().value; }
  Rational mean() const;

  /// `value:num/den` pairs separated by commas; parse_die() reads it back.
  std::string to_string() const;

  friend bool operator==(const Die& a, const Die& b) {
    return a.outcomes_ == b.outcomes_;
  }

 private:
  explicit Die(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {}
  std::vector<Outcome> outcomes_;
};

/// Accepts either `value:prob` lists ("0:1/2,1:1/2") or generating-function
/// strings ("(2z^-3+z+z^5)/4"). Whitespace is ignored.
Die parse_die(std::string_view text);

Die negate(const Die& d);

/// Distribution of a - b for independent rolls.
Die difference(const Die& a, const Die& b);

/// Mean-zero integer rescaling: die = scale * original - offset, where
/// offset/scale is the original mean in lowest terms.
struct CanonicalDie {
  Die die;
  std::int64_t scale;
  std::int64_t offset;
};

CanonicalDie canonicalize(const Die& d);

/// Exact moments; index k of `central` holds E(X-mean)^k, likewise
/// `abs_central` holds E|X-mean|^k. Entries 0 and 1 are filled for
/// convenience (1 and 0 / 1 and mean absolute deviation).
struct MomentSet {
  Rational mean;
  std::array<Rational, 5> central;
  std::array<Rational, 5> abs_central;
  double sigma = 0.0;
  double nu3 = 0.0;
  double nu4 = 0.0;

  const Rational& mu2() const { return central[2]; }
  const Rational& mu3() const { return central[3]; }
  const Rational& mu4() const { return central[4]; }
};

/// Throws Error(kDegenerate) if the variance is zero.
MomentSet moments(const Die& d);

}  // namespace edgetilt
