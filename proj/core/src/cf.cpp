#include "edgetilt/cf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "edgetilt/error.hpp"
#include "edgetilt/lattice.hpp"

namespace edgetilt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kResyncCells = 256;
constexpr int kMaxHalvings = 20;

std::complex<double> ipow(std::complex<double> z, std::int64_t n) {
  std::complex<double> acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

// Golden-section search for a maximum (sign = +1) or minimum (sign = -1).
double golden(const std::function<double(double)>& f, double a, double b, double sign) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sign * f(c);
  double fd = sign * f(d);
  while (b - a > 1e-11) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sign * f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::complex<double> cf_eval(const Die& d, double t) {
  std::complex<double> sum = 0.0;
  for (const auto& o : d.outcomes()) {
    sum += o.prob.get_d() * std::polar(1.0, t * static_cast<double>(o.value));
  }
  return sum;
}

NormalizedCf::NormalizedCf(const Die& d) {
  span_ = span_shift(d).span;
  const Rational mean = d.mean();
  Rational mad = 0;
  Rational m2 = 0, m3 = 0, m4 = 0;
  for (const auto& o : d.outcomes()) {
    const Rational dev = (Rational(o.value) - mean) / span_;
    probs_.push_back(o.prob.get_d());
    offsets_.push_back(static_cast<double>((o.value - d.min_value()) / span_));
    centered_.push_back(dev.get_d());
    mad += o.prob * (sgn(dev) < 0 ? Rational(-dev) : dev);
    m2 += o.prob * dev * dev;
    m3 += o.prob * dev * dev * dev;
    m4 += o.prob * dev * dev * dev * dev;
  }
  lipschitz_ = mad.get_d() * (1.0 + 1e-12);
  mu2_ = m2.get_d();
  mu3_ = m3.get_d();
  mu4_ = m4.get_d();
}

std::complex<double> NormalizedCf::operator()(double t) const {
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    sum += probs_[j] * std::polar(1.0, t * centered_[j]);
  }
  return sum;
}

double NormalizedCf::abs(double t) const {
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    sum += probs_[j] * std::polar(1.0, t * offsets_[j]);
  }
  return std::abs(sum);
}

double NormalizedCf::certification_step() const {
  return std::min(1e-3, kCellTolerance / lipschitz_);
}

void NormalizedCf::scan_cells(double from, double to, double step,
                              const std::function<void(double, double, double)>& visit) const {
  if (!(to > from)) return;
  const auto cells = static_cast<std::size_t>(std::ceil((to - from) / step));
  const double h = (to - from) / static_cast<double>(cells);
  const double slack = lipschitz_ * h / 2.0 + kRoundingSlack;
  const std::size_t k = probs_.size();
  std::vector<std::complex<double>> term(k), rot(k);
  for (std::size_t j = 0; j < k; ++j) rot[j] = std::polar(1.0, h * offsets_[j]);

  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = from + static_cast<double>(i) * h;
    const double hi = (i + 1 == cells) ? to : lo + h;
    if (i % kResyncCells == 0) {
      const double mid = lo + 0.5 * h;
      for (std::size_t j = 0; j < k; ++j) term[j] = probs_[j] * std::polar(1.0, mid * offsets_[j]);
    }
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      sum += term[j];
      term[j] *= rot[j];
    }
    visit(lo, hi, std::abs(sum) + slack);
  }
}

CfProfile peak_profile(const Die& d) {
  const NormalizedCf cf(d);
  CfProfile prof;
  prof.lipschitz = cf.lipschitz();
  prof.peaks.push_back({0.0, 1.0});

  const double step = std::min(1e-3, 1.0 / (4.0 * cf.lipschitz()));
  const auto n = static_cast<std::size_t>(std::ceil(kPi / step));
  const double h = kPi / static_cast<double>(n);
  std::vector<double> a(n + 1);
  for (std::size_t i = 0; i <= n; ++i) a[i] = cf.abs(static_cast<double>(i) * h);

  auto absf = [&](double t) { return cf.abs(t); };
  std::vector<std::size_t> peak_idx{0};
  for (std::size_t i = 1; i <= n; ++i) {
    const bool rises = a[i] > a[i - 1];
    const bool holds = (i == n) || a[i] >= a[i + 1];
    if (!(rises && holds)) continue;
    const double lo = static_cast<double>(i - 1) * h;
    const double hi = std::min(kPi, static_cast<double>(i + 1) * h);
    double t = golden(absf, lo, hi, 1.0);
    // |f| is symmetric about pi, so a rising final sample peaks at pi.
    if (i == n) t = kPi;
    const double height = cf.abs(t);
    const double probe = 1e-7;
    const bool verified = height >= cf.abs(std::max(0.0, t - probe)) &&
                          (t + probe > kPi || height >= cf.abs(t + probe));
    if (!verified) continue;
    prof.peaks.push_back({t, height});
    peak_idx.push_back(i);
  }
  for (std::size_t p = 1; p < peak_idx.size(); ++p) {
    std::size_t arg = peak_idx[p - 1];
    for (std::size_t i = peak_idx[p - 1]; i <= peak_idx[p]; ++i) {
      if (a[i] < a[arg]) arg = i;
    }
    const double lo = static_cast<double>(arg == 0 ? 0 : arg - 1) * h;
    const double hi = std::min(kPi, static_cast<double>(arg + 1) * h);
    prof.troughs.push_back(golden(absf, lo, hi, -1.0));
  }
  return prof;
}

double r_optimal(const Die& d) {
  const NormalizedCf cf(d);
  const MomentSet ms = moments(d);
  const double d_cert = cf_quadratic_coefficient(certificate(d), ms).d_cert;

  // Near the origin: |f| <= sqrt(A^2 + B^2) + mu4 t^4 / 24 with
  // A = 1 - mu2 t^2 / 2 and B = mu3 t^3 / 6, and sqrt(A^2 + B^2) <= A + B^2/(2A).
  const double a2 = cf.mu2() / 2.0;
  const double c3 = cf.mu3() / 6.0;
  const double m4 = cf.mu4() / 24.0;
  auto taylor_bound = [&](double t) {
    const double big_a = 1.0 - a2 * t * t;
    if (big_a < 0.5) return -std::numeric_limits<double>::infinity();
    const double t2 = t * t;
    return a2 - c3 * c3 * t2 * t2 / (2.0 * big_a) - m4 * t2 - kRoundingSlack;
  };

  double best = std::numeric_limits<double>::infinity();
  cf.scan_cells(0.0, kPi, cf.certification_step(), [&](double, double hi, double upper) {
    const double lipschitz_bound = (1.0 - upper) / (hi * hi);
    best = std::min(best, std::max(lipschitz_bound, taylor_bound(hi)));
  });
  return std::max(best, d_cert);
}

double TailEnvelope::eval(double t) const {
  for (const auto& p : pieces) {
    if (t >= p.lo && t <= p.hi) return p.eval(t);
  }
  return 1.0;
}

std::int64_t TailEnvelope::monotone_from() const {
  double worst = 1.0;
  for (const auto& p : pieces) {
    if (p.kind != EnvelopePiece::Kind::kConstant) continue;
    if (p.height <= 0.0) continue;
    if (p.height >= 1.0) return std::numeric_limits<std::int64_t>::max();
    // sqrt(n) h^n is nonincreasing once n >= -1 / (2 ln h).
    worst = std::max(worst, -1.0 / (2.0 * std::log(p.height)));
  }
  return static_cast<std::int64_t>(std::ceil(worst));
}

bool certify_envelope(const NormalizedCf& cf, const TailEnvelope& env) {
  if (env.pieces.empty()) return env.s_low >= kPi;
  bool ok = true;
  cf.scan_cells(env.s_low, kPi, env.grid_step, [&](double lo, double hi, double upper) {
    if (!ok) return;
    // Each piece is constant or concave, so its minimum over a sub-interval
    // sits at an end of that sub-interval.
    double low = std::numeric_limits<double>::infinity();
    for (const auto& p : env.pieces) {
      const double a = std::max(lo, p.lo);
      const double b = std::min(hi, p.hi);
      if (a > b) continue;
      low = std::min({low, p.eval(a), p.eval(b)});
    }
    if (!(low >= upper)) ok = false;
  });
  return ok;
}

TailEnvelope quadratic_envelope(double d, double s_low) {
  TailEnvelope env;
  env.s_low = s_low;
  env.grid_step = 0.0;
  if (s_low < kPi) {
    EnvelopePiece p;
    p.kind = EnvelopePiece::Kind::kParabola;
    p.lo = s_low;
    p.hi = kPi;
    p.height = 1.0;
    p.center = 0.0;
    p.curvature = d;
    env.pieces.push_back(p);
  }
  env.certified = true;
  return env;
}

TailEnvelope build_envelope(const Die& d, const CfProfile& profile, double s_low) {
  if (!(s_low > 0.0)) throw Error(ErrorKind::kInvalidArgument, "envelope needs s_low > 0");
  const NormalizedCf cf(d);
  TailEnvelope env;
  env.s_low = s_low;
  env.grid_step = cf.certification_step();
  if (s_low >= kPi) {
    env.certified = true;
    return env;
  }
  const double step = env.grid_step;
  const double bump = cf.lipschitz() * step;

  auto constant_envelope = [&](double h) {
    TailEnvelope c = env;
    c.pieces = {{EnvelopePiece::Kind::kConstant, s_low, kPi, std::min(1.0, h), 0.0, 0.0}};
    c.certified = certify_envelope(cf, c);
    return c;
  };

  // Highest cell bound on the domain.
  double top_upper = 0.0, top_t = s_low;
  cf.scan_cells(s_low, kPi, step, [&](double lo, double hi, double upper) {
    if (upper > top_upper) {
      top_upper = upper;
      top_t = 0.5 * (lo + hi);
    }
  });

  // The basin of the peak containing the top cell, bounded by troughs.
  const auto& peaks = profile.peaks;
  const auto& troughs = profile.troughs;
  std::size_t capped = 0;
  double basin_lo = 0.0, basin_hi = kPi;
  for (std::size_t k = 1; k < peaks.size(); ++k) {
    const double lo = troughs[k - 1];
    const double hi = k < troughs.size() ? troughs[k] : kPi;
    if (top_t >= lo && top_t <= hi && peaks[k].t >= s_low) {
      capped = k;
      basin_lo = lo;
      basin_hi = hi;
    }
  }
  if (capped == 0) return constant_envelope(top_upper);

  const double t0 = peaks[capped].t;
  double h1 = 0.0, basin_top = 0.0;
  cf.scan_cells(s_low, kPi, step, [&](double lo, double hi, double upper) {
    if (lo > basin_lo && hi < basin_hi) {
      basin_top = std::max(basin_top, upper);
    } else {
      h1 = std::max(h1, upper);
    }
  });
  const double h0 = std::min(1.0, basin_top + bump);
  if (h1 >= basin_top) return constant_envelope(std::max(h1, basin_top));

  double kappa = std::numeric_limits<double>::infinity();
  cf.scan_cells(s_low, kPi, step, [&](double lo, double hi, double upper) {
    if (!(lo > basin_lo && hi < basin_hi) || upper <= h1) return;
    const double dist = std::max(std::abs(lo - t0), std::abs(hi - t0));
    kappa = std::min(kappa, (1.0 - upper / h0) / (dist * dist));
  });

  for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
    const double half_width = std::sqrt((1.0 - h1 / h0) / kappa);
    const double cap_lo = std::max(s_low, t0 - half_width);
    const double cap_hi = std::min(kPi, t0 + half_width);
    TailEnvelope cand = env;
    if (cap_lo > s_low) {
      cand.pieces.push_back({EnvelopePiece::Kind::kConstant, s_low, cap_lo, h1, 0.0, 0.0});
    }
    cand.pieces.push_back({EnvelopePiece::Kind::kParabola, cap_lo, cap_hi, h0, t0, kappa});
    if (cap_hi < kPi) {
      cand.pieces.push_back({EnvelopePiece::Kind::kConstant, cap_hi, kPi, h1, 0.0, 0.0});
    }
    if (certify_envelope(cf, cand)) {
      cand.certified = true;
      return cand;
    }
    kappa /= 2.0;
  }
  return constant_envelope(h0);
}

double tail_integral_bound(const TailEnvelope& env, std::int64_t n, double s) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be at least 1");
  if (s + 1e-15 < env.s_low) {
    throw Error(ErrorKind::kInvalidArgument, "s lies below the envelope domain");
  }
  const double nd = static_cast<double>(n);
  const double up = 1.0 + kRoundingSlack;
  double total = 0.0;
  for (const auto& p : env.pieces) {
    const double a = std::max(s, p.lo);
    const double b = std::min(kPi, p.hi);
    if (!(b > a)) continue;
    const double hn = std::exp(nd * std::log(p.height));
    double piece = 0.0;
    if (p.kind == EnvelopePiece::Kind::kConstant) {
      piece = 0.5 * hn * std::log(b / a);
    } else {
      // (h0 (1 - k u^2))^n <= h0^n exp(-n k u^2).
      const double c = nd * p.curvature;
      if (p.center == 0.0) {
        // integral_a^inf exp(-c t^2) dt / t <= exp(-c a^2) / (2 c a^2)
        piece = 0.5 * hn * std::exp(-c * a * a) / (2.0 * c * a * a);
      } else {
        const double half_gauss = 0.5 * std::sqrt(kPi / c);
        if (p.center >= a && p.center <= b) {
          piece = 0.5 * hn * half_gauss * (1.0 / a + 1.0 / p.center);
        } else {
          const double gap = p.center < a ? a - p.center : p.center - b;
          piece = 0.5 * hn * half_gauss * std::erfc(std::sqrt(c) * gap) / a;
        }
      }
    }
    total += piece * up;
  }
  return total * up;
}

double prob_below_mean_integral(const Die& d, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be at least 1");
  const CanonicalDie canon = canonicalize(d);
  const SpanShift ss = span_shift(canon.die);
  const NormalizedCf cf(canon.die);
  // Shift of the span-normalized die is a / b; alpha = 1/2 - {n a / b}.
  const std::int64_t na_mod = mul_mod(n, ss.shift, ss.span);
  const double alpha = 0.5 - static_cast<double>(na_mod) / static_cast<double>(ss.span);

  auto integrand = [&](double t) {
    const std::complex<double> phase = std::polar(1.0, alpha * t);
    const double im = std::imag(phase * ipow(cf(t), n));
    const double dker = (t / 2.0) / std::sin(t / 2.0);
    return im * dker / t;
  };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, kPi, 12, 1e-13, &err);
  return 0.5 - integral / kPi;
}

}  // namespace edgetilt
