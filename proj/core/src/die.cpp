#include "edgetilt/die.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "edgetilt/error.hpp"

namespace edgetilt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kInvalidDie: return "invalid die";
    case ErrorKind::kDegenerate: return "degenerate distribution";
    case ErrorKind::kBudgetExceeded: return "resource budget exceeded";
    case ErrorKind::kSymmetricUndetermined: return "symmetric: leading constant is zero";
    case ErrorKind::kBelowValidityFloor: return "below validity floor";
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kSearchCapExceeded: return "search cap exceeded";
  }
  return "unknown error";
}

Die Die::from_outcomes(std::vector<Outcome> outcomes) {
  std::map<std::int64_t, Rational> merged;
  for (auto& o : outcomes) {
    if (sgn(o.prob) < 0) {
      throw Error(ErrorKind::kInvalidDie,
                  "negative probability at value " + std::to_string(o.value));
    }
    merged[o.value] += o.prob;
  }
  std::vector<Outcome> out;
  Rational total = 0;
  for (auto& [value, prob] : merged) {
    if (sgn(prob) == 0) continue;
    prob.canonicalize();
    total += prob;
    out.push_back({value, prob});
  }
  if (total != 1) {
    throw Error(ErrorKind::kInvalidDie,
                "probabilities sum to " + total.get_str() + ", not 1");
  }
  if (out.size() < 2) {
    throw Error(ErrorKind::kInvalidDie, "a die needs at least two values");
  }
  return Die(std::move(out));
}

Rational Die::mean() const {
  Rational m = 0;
  for (const auto& o : outcomes_) m += o.prob * o.value;
  return m;
}

std::string Die::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& o : outcomes_) {
    if (!first) os << ',';
    first = false;
    os << o.value << ':' << o.prob.get_num().get_str() << '/'
       << o.prob.get_den().get_str();
  }
  return os.str();
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  BigInt unsigned_integer() {
    std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  bool at_digit() const {
    return !done() && std::isdigit(static_cast<unsigned char>(peek()));
  }

  std::int64_t signed_int64() {
    bool neg = accept('-');
    if (!neg) accept('+');
    BigInt v = unsigned_integer();
    if (neg) v = -v;
    if (!v.fits_slong_p()) fail("integer out of range");
    return v.get_si();
  }

  // integer, a/b, or a decimal literal such as 0.125
  Rational rational() {
    BigInt num = unsigned_integer();
    if (accept('/')) {
      BigInt den = unsigned_integer();
      if (den == 0) fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    if (accept('.')) {
      std::size_t start = pos_;
      BigInt frac = at_digit() ? unsigned_integer() : BigInt(0);
      std::size_t digits = pos_ - start;
      BigInt scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
      Rational q(num * scale + frac, scale);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kParse,
                msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;
};

Die parse_pairs(Cursor& cur) {
  std::vector<Outcome> out;
  do {
    std::int64_t value = cur.signed_int64();
    cur.expect(':');
    out.push_back({value, cur.rational()});
  } while (cur.accept(','));
  if (!cur.done()) cur.fail("unexpected trailing input");
  return Die::from_outcomes(std::move(out));
}

// term := [coef]['*'][z['^'exp]]
Outcome parse_term(Cursor& cur) {
  bool has_coef = cur.at_digit();
  BigInt coef = has_coef ? cur.unsigned_integer() : BigInt(1);
  std::int64_t exponent = 0;
  if (has_coef) cur.accept('*');
  if (cur.accept('z')) {
    exponent = 1;
    if (cur.accept('^')) {
      bool paren = cur.accept('(');
      exponent = cur.signed_int64();
      if (paren) cur.expect(')');
    }
  } else if (!has_coef) {
    cur.fail("expected a coefficient or z");
  }
  return {exponent, Rational(coef)};
}

Die parse_generating_function(Cursor& cur) {
  bool paren = cur.accept('(');
  std::vector<Outcome> terms;
  do {
    terms.push_back(parse_term(cur));
  } while (cur.accept('+'));
  if (paren) cur.expect(')');
  Rational divisor = 1;
  if (cur.accept('/')) {
    divisor = cur.rational();
    if (sgn(divisor) == 0) cur.fail("zero divisor");
  }
  if (!cur.done()) cur.fail("unexpected trailing input");
  for (auto& t : terms) t.prob /= divisor;
  return Die::from_outcomes(std::move(terms));
}

}  // namespace

Die parse_die(std::string_view text) {
  Cursor cur(text);
  if (cur.done()) cur.fail("empty die specification");
  if (text.find('z') != std::string_view::npos) return parse_generating_function(cur);
  return parse_pairs(cur);
}

Die negate(const Die& d) {
  std::vector<Outcome> out;
  out.reserve(d.size());
  for (const auto& o : d.outcomes()) out.push_back({-o.value, o.prob});
  return Die::from_outcomes(std::move(out));
}

Die difference(const Die& a, const Die& b) {
  std::vector<Outcome> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.outcomes()) {
    for (const auto& y : b.outcomes()) {
      out.push_back({x.value - y.value, x.prob * y.prob});
    }
  }
  return Die::from_outcomes(std::move(out));
}

CanonicalDie canonicalize(const Die& d) {
  Rational mu = d.mean();
  mu.canonicalize();
  const BigInt& q = mu.get_den();
  const BigInt& p = mu.get_num();
  if (!q.fits_slong_p() || !p.fits_slong_p()) {
    throw Error(ErrorKind::kInvalidArgument, "mean denominator too large to rescale");
  }
  const std::int64_t scale = q.get_si();
  const std::int64_t offset = p.get_si();
  std::vector<Outcome> out;
  out.reserve(d.size());
  for (const auto& o : d.outcomes()) {
    BigInt v = BigInt(o.value) * scale - offset;
    if (!v.fits_slong_p()) {
      throw Error(ErrorKind::kInvalidArgument, "canonical value out of range");
    }
    out.push_back({v.get_si(), o.prob});
  }
  return {Die::from_outcomes(std::move(out)), scale, offset};
}

MomentSet moments(const Die& d) {
  MomentSet ms;
  ms.mean = d.mean();
  for (auto& c : ms.central) c = 0;
  for (auto& c : ms.abs_central) c = 0;
  for (const auto& o : d.outcomes()) {
    const Rational dev = Rational(o.value) - ms.mean;
    const Rational adev = abs(dev);
    Rational pow_dev = 1;
    Rational pow_adev = 1;
    for (std::size_t k = 0; k < ms.central.size(); ++k) {
      ms.central[k] += o.prob * pow_dev;
      ms.abs_central[k] += o.prob * pow_adev;
      pow_dev *= dev;
      pow_adev *= adev;
    }
  }
  for (auto& c : ms.central) c.canonicalize();
  for (auto& c : ms.abs_central) c.canonicalize();
  if (sgn(ms.mu2()) <= 0) {
    throw Error(ErrorKind::kDegenerate, "variance is zero");
  }
  const double mu2 = ms.mu2().get_d();
  ms.sigma = std::sqrt(mu2);
  ms.nu3 = ms.mu3().get_d() / (mu2 * ms.sigma);
  ms.nu4 = ms.mu4().get_d() / (mu2 * mu2);
  return ms;
}

}  // namespace edgetilt
