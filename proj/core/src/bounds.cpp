#include "edgetilt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "edgetilt/error.hpp"

namespace edgetilt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1.0 + 1e-12;

std::int64_t mod(std::int64_t x, std::int64_t b) {
  const std::int64_t r = x % b;
  return r < 0 ? r + b : r;
}

// (-c a mod b) - (c a mod b), exactly.
std::int64_t lattice_offset(std::int64_t c, std::int64_t a, std::int64_t b) {
  const std::int64_t ca = mul_mod(c, a, b);
  return mod(-ca, b) - mod(ca, b);
}

}  // namespace

DieSummary summarize(const Die& d) {
  CanonicalDie canon = canonicalize(d);
  LatticeStructure ls = certificate(canon.die);
  MomentSet ms = moments(canon.die);
  return {d, std::move(canon), std::move(ls), std::move(ms)};
}

GlobalConstants global_constants(const DieSummary& s) {
  GlobalConstants gc;
  const MomentSet& ms = s.moments;
  gc.span = s.lattice.span;
  gc.shift = s.lattice.shift;
  gc.sigma = ms.sigma;
  gc.sigma_norm = ms.sigma / static_cast<double>(gc.span);
  gc.nu3 = ms.nu3;
  gc.nu4 = ms.nu4;
  gc.p0 = std::numbers::e - 1.0;
  gc.p1 = 3.0 * (kPi - 3.0) / (kPi * kPi * kPi);
  gc.q1 = 0.2 + gc.nu4 / 24.0;
  const double b = static_cast<double>(gc.span);
  const double mu2 = ms.mu2().get_d();
  gc.q2 = gc.p0 * gc.q1 / 2.0 + b * b * gc.p1 / mu2;
  gc.q4 = std::abs(gc.nu3) / 6.0;
  const CfQuadratic quad = cf_quadratic_coefficient(s.lattice, ms);
  gc.r = quad.r;
  gc.d_cert = quad.d_cert;
  const double floor3 = 81.0 * b * b * b * b / (gc.q1 * std::pow(kPi, 4) * mu2 * mu2);
  const double floor = std::max({4.0 * gc.q1, 1.0 / gc.q1, floor3});
  gc.n_min = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(floor)));
  return gc;
}

ClassConstants class_constants(const DieSummary& s, std::int64_t residue) {
  const std::int64_t b = s.lattice.span;
  const std::int64_t a = s.lattice.shift;
  if (residue < 0 || residue >= b) {
    throw Error(ErrorKind::kInvalidArgument,
                "residue " + std::to_string(residue) + " outside [0, " + std::to_string(b) + ")");
  }
  const MomentSet& ms = s.moments;
  ClassConstants cc;
  cc.residue = residue;
  const std::int64_t ca = mul_mod(residue, a, b);
  cc.beta = (static_cast<double>(b) / 2.0 - static_cast<double>(ca)) / ms.sigma;
  cc.q3 = std::abs(cc.beta);
  const double q4 = std::abs(ms.nu3) / 6.0;
  const double q3 = cc.q3;
  cc.q5 = q3 * q3 * q3 / 6.0 + 1.5 * q3 * q3 * q4 + 7.5 * q3 * q4 * q4 + 17.5 * q4 * q4 * q4;
  const std::int64_t k = lattice_offset(residue, a, b);
  cc.L_tilt = static_cast<double>(k) / ms.sigma - ms.nu3 / 3.0;
  cc.L_minus = cc.beta - ms.nu3 / 6.0;
  // L = (k mu2 - mu3 / 3) / sigma^3 vanishes iff 3 k mu2 = mu3.
  cc.symmetric = (3 * k * ms.mu2() == ms.mu3());
  return cc;
}

const char* to_string(TailMode mode) {
  switch (mode) {
    case TailMode::kCert: return "cert";
    case TailMode::kOptimal: return "optimal";
    case TailMode::kEnvelope: return "envelope";
  }
  return "unknown";
}

std::optional<TailMode> parse_tail_mode(std::string_view text) {
  if (text == "cert") return TailMode::kCert;
  if (text == "optimal") return TailMode::kOptimal;
  if (text == "envelope") return TailMode::kEnvelope;
  return std::nullopt;
}

TailBound TailBound::quadratic(TailMode mode, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidArgument, "tail coefficient must be positive");
  TailBound t;
  t.mode_ = mode;
  t.r_ = r;
  return t;
}

TailBound TailBound::from_envelope(TailEnvelope env) {
  TailBound t;
  t.mode_ = TailMode::kEnvelope;
  t.env_ = std::move(env);
  return t;
}

std::optional<TailBound> TailBound::make(const DieSummary& s, const GlobalConstants& gc,
                                         TailMode mode) {
  switch (mode) {
    case TailMode::kCert:
      return quadratic(mode, gc.r);
    case TailMode::kOptimal: {
      const double r_opt = r_optimal(s.canonical.die);
      return quadratic(mode, 2.0 * r_opt / (gc.sigma_norm * gc.sigma_norm));
    }
    case TailMode::kEnvelope: {
      const double s_low = 1.0 / gc.sigma_norm;
      const CfProfile profile = peak_profile(s.canonical.die);
      TailEnvelope env = build_envelope(s.canonical.die, profile, s_low);
      if (!env.certified) return std::nullopt;
      for (const auto& p : env.pieces) {
        if (!(p.height < 1.0)) return std::nullopt;
      }
      return from_envelope(std::move(env));
    }
  }
  return std::nullopt;
}

double TailBound::tilt_term(std::int64_t n) const {
  if (env_) return 2.0 * tail_integral_bound(*env_, n, env_->s_low);
  const double nr = static_cast<double>(n) * r_;
  return std::exp(-nr / 2.0) / nr * kSlack;
}

std::int64_t TailBound::monotone_from() const {
  if (env_) return env_->monotone_from();
  return 1;
}

double BoundTerms::total() const {
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum * kSlack;
}

double BoundTerms::rest() const {
  double sum = 0.0;
  for (std::size_t i = 2; i < terms.size(); ++i) sum += terms[i];
  return sum * kSlack;
}

double BoundTerms::scale() const {
  return std::sqrt(2.0 * kPi * static_cast<double>(n));
}

BoundTerms error_bound_terms(const GlobalConstants& gc, const ClassConstants& cc,
                             std::int64_t n, const TailBound& tail) {
  if (n < gc.n_min) {
    throw Error(ErrorKind::kBelowValidityFloor,
                "n = " + std::to_string(n) + " is below the validity floor n_min = " +
                    std::to_string(gc.n_min) +
                    " (max of 4 q1, 1/q1, 81 b^4 / (q1 pi^4 mu2^2))");
  }
  if (mod(n, gc.span) != cc.residue) {
    throw Error(ErrorKind::kInvalidArgument,
                "n = " + std::to_string(n) + " is not in residue class " +
                    std::to_string(cc.residue) + " mod " + std::to_string(gc.span));
  }
  const double nd = static_cast<double>(n);
  const double eta = 0.5 * std::sqrt(nd / gc.q1);
  const double quarter = std::pow(gc.q1 * nd, 0.25);
  const double damp = std::exp(-eta);

  BoundTerms bt;
  bt.n = n;
  bt.terms[0] = 2.0 * gc.q2 / nd;
  bt.terms[1] = tail.tilt_term(n);
  bt.terms[2] = 2.0 * cc.q5 / (std::sqrt(2.0 * kPi) * std::pow(nd, 1.5));
  bt.terms[3] = damp * (1.0 + gc.p0) / eta;
  bt.terms[4] = damp * 4.0 * gc.p0 * gc.q1 / nd;
  bt.terms[5] = damp * (cc.q3 + gc.q4) / (eta * kPi * quarter);
  bt.terms[6] = damp * 2.0 * gc.q4 / (kPi * quarter);
  for (double& t : bt.terms) t *= kSlack;
  return bt;
}

double error_bound_tilt(const GlobalConstants& gc, const ClassConstants& cc, std::int64_t n,
                        const TailBound& tail) {
  return error_bound_terms(gc, cc, n, tail).total();
}

double s_max(const GlobalConstants& gc, std::int64_t n) {
  return std::min({1.0, kPi * gc.sigma_norm / 3.0,
                   std::pow(gc.q1 * static_cast<double>(n), -0.25)});
}

double error_bound_cdf(const GlobalConstants& gc, const ClassConstants& cc, std::int64_t n,
                       double s, const TailBound& tail) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  if (mod(n, gc.span) != cc.residue) {
    throw Error(ErrorKind::kInvalidArgument,
                "n = " + std::to_string(n) + " is not in residue class " +
                    std::to_string(cc.residue));
  }
  if (!(s > 0.0) || s > s_max(gc, n)) {
    throw Error(ErrorKind::kInvalidArgument,
                "s = " + std::to_string(s) + " violates s <= min(1, pi sigma / 3, (q1 n)^(-1/4))");
  }
  const double nd = static_cast<double>(n);
  const double ns2 = nd * s * s;
  const double bracket = gc.p0 * gc.q1 * s * s + 1.0 / ns2 + 2.0 * gc.p0 * gc.q1 / nd +
                         (cc.q3 + gc.q4) / (kPi * nd * s) + gc.q4 * s / kPi;
  const double total = gc.q2 / nd + tail.tilt_term(n) / 2.0 +
                       cc.q5 / (std::sqrt(2.0 * kPi) * std::pow(nd, 1.5)) +
                       std::exp(-ns2 / 2.0) * bracket;
  return total * kSlack * kSlack;
}

std::int64_t n1(const GlobalConstants& gc, const ClassConstants& cc) {
  if (cc.symmetric) {
    throw Error(ErrorKind::kSymmetricUndetermined,
                "leading constant is zero for residue " + std::to_string(cc.residue));
  }
  return static_cast<std::int64_t>(
      std::ceil(8.0 * kPi * gc.q2 * gc.q2 / (cc.L_tilt * cc.L_tilt)));
}

std::int64_t n2(const GlobalConstants& gc, const ClassConstants& cc, const TailBound& tail,
                std::int64_t cap) {
  if (cc.symmetric) {
    throw Error(ErrorKind::kSymmetricUndetermined,
                "leading constant is zero for residue " + std::to_string(cc.residue));
  }
  const std::int64_t b = gc.span;
  const double target = std::abs(cc.L_tilt);
  auto first_in_class = [&](std::int64_t from) {
    return from + mod(cc.residue - from, b);
  };
  auto passes = [&](std::int64_t n) {
    const BoundTerms bt = error_bound_terms(gc, cc, n, tail);
    return bt.scale() * bt.total() < target;
  };

  const std::int64_t floor = first_in_class(gc.n_min);
  // Beyond `start` every scaled term is nonincreasing in n.
  const std::int64_t start = first_in_class(std::max(gc.n_min, tail.monotone_from()));
  if (start > cap) {
    throw Error(ErrorKind::kSearchCapExceeded, "monotone region starts beyond the search cap");
  }

  std::int64_t first_pass = start;
  if (!passes(start)) {
    std::int64_t lo = 0;  // class steps from start, failing
    std::int64_t hi = 1;
    while (!passes(start + hi * b)) {
      lo = hi;
      if (start + 2 * hi * b > cap) {
        if (!passes(start + ((cap - start) / b) * b)) {
          throw Error(ErrorKind::kSearchCapExceeded,
                      "bound does not fall below |L| before n = " + std::to_string(cap));
        }
        hi = (cap - start) / b;
        break;
      }
      hi *= 2;
    }
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (passes(start + mid * b)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    first_pass = start + hi * b;
  }
  if (first_pass > start) return first_pass;

  // Below the monotone region, walk down while the bound still holds.
  std::int64_t n = first_pass;
  while (n - b >= floor && passes(n - b)) n -= b;
  return n;
}

}  // namespace edgetilt
