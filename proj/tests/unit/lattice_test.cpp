#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "edgetilt/lattice.hpp"
#include "oracles.hpp"

using namespace edgetilt;

namespace {

// Smallest l1 norm over certificates on at most three values with
// coefficients in [-bound, bound], by brute force.
std::int64_t brute_force_min_norm(const Die& d, std::int64_t b, std::int64_t bound) {
  const auto outs = d.outcomes();
  const std::size_t k = outs.size();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t l = j + 1; l <= k; ++l) {
        for (std::int64_t ci = -bound; ci <= bound; ++ci) {
          for (std::int64_t cj = -bound; cj <= bound; ++cj) {
            const std::int64_t cl = -ci - cj;
            if (l == k && cl != 0) continue;
            const std::int64_t xl = l == k ? 0 : outs[l].value;
            if (ci * outs[i].value + cj * outs[j].value + cl * xl != b) continue;
            best = std::min(best, std::abs(ci) + std::abs(cj) + std::abs(cl));
          }
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST(SpanShift, Examples) {
  const SpanShift x = span_shift(parse_die(corpus::kX));
  EXPECT_EQ(x.span, 4);
  EXPECT_EQ(x.shift, 1);
  const SpanShift y = span_shift(parse_die(corpus::kY));
  EXPECT_EQ(y.span, 1);
  EXPECT_EQ(y.shift, 0);
  const SpanShift coin = span_shift(parse_die(corpus::kCoin));
  EXPECT_EQ(coin.span, 1);
  EXPECT_EQ(coin.shift, 0);
  EXPECT_EQ(span_shift(parse_die("-7:1/2,5:1/2")).shift, 5);
}

TEST(Certificate, Y) {
  const LatticeStructure ls = certificate(parse_die(corpus::kY));
  EXPECT_EQ(ls.l1_norm, 4);
  EXPECT_EQ(ls.min_prob, Rational(1, 18));
  const std::vector<CertificateTerm> expected{{-8, 1}, {0, -2}, {9, 1}};
  EXPECT_EQ(ls.certificate, expected);
  EXPECT_TRUE(verify_certificate(parse_die(corpus::kY), ls));
}

TEST(Certificate, CoinAndX) {
  const LatticeStructure coin = certificate(parse_die(corpus::kCoin));
  EXPECT_EQ(coin.l1_norm, 2);
  EXPECT_EQ(coin.min_prob, Rational(1, 2));

  const LatticeStructure x = certificate(parse_die(corpus::kX));
  EXPECT_EQ(x.span, 4);
  EXPECT_EQ(x.l1_norm, 2);
  EXPECT_EQ(x.min_prob, Rational(1, 4));
  EXPECT_TRUE(verify_certificate(parse_die(corpus::kX), x));
}

TEST(Certificate, MinimalAgainstBruteForce) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const Die d = oracle::random_die(rng, 3 + i % 3, -15, 15);
    const LatticeStructure ls = certificate(d);
    ASSERT_TRUE(verify_certificate(d, ls)) << d.to_string();
    EXPECT_GE(ls.l1_norm, 2);
    EXPECT_EQ(ls.span, oracle::span(d));
    EXPECT_EQ(ls.l1_norm, brute_force_min_norm(d, ls.span, 30)) << d.to_string();
  }
}

TEST(Certificate, GcdFallbackForWideSupport) {
  // Coprime gaps that need large coefficients on two or three values.
  const Die d = parse_die("0:1/3,997:1/3,1999:1/3");
  const LatticeStructure ls = certificate(d);
  EXPECT_EQ(ls.span, 1);
  EXPECT_TRUE(verify_certificate(d, ls));
}

TEST(Certificate, VerifyRejectsTampering) {
  const Die y = parse_die(corpus::kY);
  LatticeStructure ls = certificate(y);
  ls.certificate[0].coefficient += 1;
  EXPECT_FALSE(verify_certificate(y, ls));
}

TEST(CfQuadratic, Values) {
  const Die y = parse_die(corpus::kY);
  const CfQuadratic q = cf_quadratic_coefficient(certificate(y), moments(y));
  EXPECT_NEAR(q.d_cert, 0.0028144, 1e-7);
  EXPECT_NEAR(q.r, 2.0 * q.d_cert / 68.0, 1e-15);

  const Die coin = parse_die(corpus::kCoin);
  const CfQuadratic c = cf_quadratic_coefficient(certificate(coin), moments(coin));
  EXPECT_NEAR(c.d_cert, 1.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
}

TEST(CfQuadratic, SampledSoundness) {
  std::mt19937_64 rng(23);
  std::vector<Die> dice;
  for (const auto& [name, d] : corpus::all()) dice.push_back(d);
  for (int i = 0; i < 10; ++i) dice.push_back(oracle::random_die(rng, 3 + i % 2, -8, 8));
  for (const Die& d : dice) {
    const MomentSet ms = moments(d);
    const LatticeStructure ls = certificate(d);
    const double dc = cf_quadratic_coefficient(ls, ms).d_cert;
    const double mu2_norm = ms.mu2().get_d() / static_cast<double>(ls.span * ls.span);
    EXPECT_LT(dc, mu2_norm / 2.0);
    for (int i = 0; i <= 10000; ++i) {
      const double t = -std::numbers::pi + 2.0 * std::numbers::pi * i / 10000.0;
      ASSERT_LE(oracle::abs_cf(d, t), 1.0 - dc * t * t + 1e-12) << d.to_string() << " t=" << t;
    }
  }
}
