#include "edgetilt/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>

#include "edgetilt/error.hpp"

namespace edgetilt {

namespace {

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
struct Bezout {
  std::int64_t g, s, t;
};

Bezout extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

struct Candidate {
  std::vector<CertificateTerm> terms;
  std::int64_t l1 = 0;
  Rational min_prob;
};

bool better(const Candidate& a, const std::optional<Candidate>& best) {
  if (!best) return true;
  if (a.l1 != best->l1) return a.l1 < best->l1;
  return a.min_prob > best->min_prob;
}

Candidate make_candidate(const Die& d, std::vector<CertificateTerm> terms) {
  Candidate c;
  bool first = true;
  for (const auto& term : terms) {
    c.l1 += std::abs(term.coefficient);
    for (const auto& o : d.outcomes()) {
      if (o.value == term.value) {
        if (first || o.prob < c.min_prob) c.min_prob = o.prob;
        first = false;
      }
    }
  }
  c.terms = std::move(terms);
  return c;
}

// Lemma-style construction: fix the smallest value y, combine the reduced
// differences (x - y)/b with Bezout coefficients, then balance c_y.
Candidate gcd_certificate(const Die& d, std::int64_t span) {
  const auto outs = d.outcomes();
  const std::int64_t y = outs.front().value;
  std::vector<std::int64_t> coef(outs.size(), 0);
  std::int64_t g = 0;
  for (std::size_t i = 1; i < outs.size(); ++i) {
    const std::int64_t diff = (outs[i].value - y) / span;
    if (g == 0) {
      g = diff;
      coef[i] = 1;
      continue;
    }
    const Bezout bz = extended_gcd(g, diff);
    for (std::size_t j = 1; j < i; ++j) coef[j] *= bz.s;
    coef[i] = bz.t;
    g = bz.g;
    if (g == 1) break;
  }
  std::int64_t sum = 0;
  std::vector<CertificateTerm> terms;
  for (std::size_t i = 1; i < outs.size(); ++i) {
    if (coef[i] == 0) continue;
    sum += coef[i];
    terms.push_back({outs[i].value, coef[i]});
  }
  if (sum != 0) terms.insert(terms.begin(), {y, -sum});
  return make_candidate(d, std::move(terms));
}

}  // namespace

SpanShift span_shift(const Die& d) {
  const auto outs = d.outcomes();
  std::int64_t g = 0;
  for (const auto& o : outs) g = std::gcd(g, o.value - outs.front().value);
  return {g, floor_mod(outs.front().value, g)};
}

LatticeStructure certificate(const Die& d) {
  const SpanShift ss = span_shift(d);
  const auto outs = d.outcomes();
  const std::size_t k = outs.size();
  const std::int64_t b = ss.span;
  std::optional<Candidate> best;

  // Pairs: c (y - x) = b forces y - x = b and c = 1.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (outs[j].value - outs[i].value != b) continue;
      Candidate c = make_candidate(d, {{outs[i].value, -1}, {outs[j].value, 1}});
      if (better(c, best)) best = std::move(c);
    }
  }

  // Triples with all three coefficients nonzero. An l1 norm of 2 is the
  // minimum possible, so the search stops there.
  if ((!best || best->l1 > 2) && k <= kMaxTripleSearchValues) {
    const std::int64_t lim = kMaxSearchCoefficient;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        for (std::size_t l = j + 1; l < k; ++l) {
          const std::int64_t xi = outs[i].value, xj = outs[j].value, xl = outs[l].value;
          for (std::int64_t ci = -lim; ci <= lim; ++ci) {
            if (ci == 0) continue;
            // ci xi + cj xj + cl xl = b with cl = -ci - cj:
            // ci (xi - xl) + cj (xj - xl) = b.
            const std::int64_t rest = b - ci * (xi - xl);
            const std::int64_t step = xj - xl;
            if (rest % step != 0) continue;
            const std::int64_t cj = rest / step;
            const std::int64_t cl = -ci - cj;
            if (cj == 0 || cl == 0 || std::abs(cj) > lim || std::abs(cl) > lim) continue;
            const std::int64_t l1 = std::abs(ci) + std::abs(cj) + std::abs(cl);
            if (best && l1 > best->l1) continue;
            Candidate c = make_candidate(d, {{xi, ci}, {xj, cj}, {xl, cl}});
            if (better(c, best)) best = std::move(c);
          }
        }
      }
    }
  }

  Candidate fallback = gcd_certificate(d, b);
  if (better(fallback, best)) best = std::move(fallback);

  LatticeStructure ls;
  ls.span = b;
  ls.shift = ss.shift;
  ls.certificate = std::move(best->terms);
  ls.l1_norm = best->l1;
  ls.min_prob = best->min_prob;
  return ls;
}

bool verify_certificate(const Die& d, const LatticeStructure& ls) {
  std::int64_t sum = 0, weighted = 0, l1 = 0;
  Rational m;
  bool first = true;
  for (const auto& term : ls.certificate) {
    if (term.coefficient == 0) return false;
    const Outcome* hit = nullptr;
    for (const auto& o : d.outcomes()) {
      if (o.value == term.value) hit = &o;
    }
    if (hit == nullptr) return false;
    if (first || hit->prob < m) m = hit->prob;
    first = false;
    sum += term.coefficient;
    weighted += term.coefficient * term.value;
    l1 += std::abs(term.coefficient);
  }
  return !first && sum == 0 && weighted == ls.span && l1 == ls.l1_norm && m == ls.min_prob;
}

std::int64_t mul_mod(std::int64_t x, std::int64_t y, std::int64_t m) {
  BigInt r = BigInt(x) * y;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), BigInt(m).get_mpz_t());
  return r.get_si();
}

CfQuadratic cf_quadratic_coefficient(const LatticeStructure& ls, const MomentSet& ms) {
  constexpr double pi = std::numbers::pi;
  const double m = ls.min_prob.get_d();
  const double c = static_cast<double>(ls.l1_norm);
  const double b = static_cast<double>(ls.span);
  const double d_cert = 8.0 * m / (pi * pi * c * c);
  const double r = 2.0 * d_cert * b * b / ms.mu2().get_d();
  return {d_cert, r};
}

}  // namespace edgetilt
