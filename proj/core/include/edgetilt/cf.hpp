#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "edgetilt/die.hpp"

namespace edgetilt {

/// sum_x p_x exp(i t x) over the die's own values, with double probabilities.
std::complex<double> cf_eval(const Die& d, double t);

/// Characteristic function of the die centred at its mean and divided by its
/// span, so that |f| has period 2 pi and |f(t)| < 1 on (0, 2 pi).
class NormalizedCf {
 public:
  explicit NormalizedCf(const Die& d);

  /// E exp(i t (X - mean) / span).
  std::complex<double> operator()(double t) const;
  double abs(double t) const;

  /// Upper bound on the Lipschitz constant of |f|: E|X - mean| / span,
  /// rounded up.
  double lipschitz() const { return lipschitz_; }

  /// Central moments of the normalized die (mu2, mu3, mu4).
  double mu2() const { return mu2_; }
  double mu3() const { return mu3_; }
  double mu4() const { return mu4_; }
  std::int64_t span() const { return span_; }

  /// Calls visit(lo, hi, upper) for consecutive cells [lo, hi] of width at
  /// most `step` covering [from, to], where `upper` >= |f| on the cell
  /// (midpoint value plus Lipschitz slack plus rounding slack).
  void scan_cells(double from, double to, double step,
                  const std::function<void(double, double, double)>& visit) const;

  /// Grid step with lipschitz() * step <= kCellTolerance.
  double certification_step() const;

 private:
  std::vector<double> probs_;
  std::vector<double> offsets_;  // (x - min) / span, exact small integers
  std::vector<double> centered_;  // (x - mean) / span
  std::int64_t span_ = 1;
  double lipschitz_ = 0.0;
  double mu2_ = 0.0, mu3_ = 0.0, mu4_ = 0.0;
};

/// Per-cell Lipschitz slack target: M * delta.
inline constexpr double kCellTolerance = 1e-6;
/// Upward slack added to every floating bound stage.
inline constexpr double kRoundingSlack = 1e-12;

struct Peak {
  double t;
  double height;
};

/// Local maxima of |f| for the span-normalized die on [0, pi]. The first
/// entry is always the maximum at the origin (t = 0, height 1); `troughs`
/// holds the minimum between each pair of consecutive peaks.
struct CfProfile {
  double lipschitz = 0.0;
  std::vector<Peak> peaks;
  std::vector<double> troughs;
};

CfProfile peak_profile(const Die& d);

/// Certified lower bound on min over t in (0, pi] of (1 - |f(t)|) / t^2 for
/// the span-normalized die. Never below the certificate coefficient.
double r_optimal(const Die& d);

struct EnvelopePiece {
  enum class Kind { kConstant, kParabola };

  Kind kind = Kind::kConstant;
  double lo = 0.0;
  double hi = 0.0;
  double height = 0.0;     // constant value, or apex value of the parabola
  double center = 0.0;     // parabola apex
  double curvature = 0.0;  // value = height * (1 - curvature * (t - center)^2)

  double eval(double t) const {
    if (kind == Kind::kConstant) return height;
    const double u = t - center;
    return height * (1.0 - curvature * u * u);
  }
};

/// Piecewise upper bound on |f| over [s_low, pi].
struct TailEnvelope {
  std::vector<EnvelopePiece> pieces;
  double s_low = 0.0;
  double grid_step = 0.0;
  bool certified = false;

  double eval(double t) const;
  /// Smallest n from which sqrt(n) times the tail bound is nonincreasing.
  std::int64_t monotone_from() const;
};

/// Constant at the second-highest peak (or at the boundary value when that is
/// higher) with a parabola cap over the dominant peak. The cap curvature is
/// derived from the certification grid and halved until certification
/// passes; after 20 failed halvings the envelope is the constant h0.
TailEnvelope build_envelope(const Die& d, const CfProfile& profile, double s_low);

/// The envelope 1 - d t^2 on [s_low, pi] (a single parabola centred at 0).
TailEnvelope quadratic_envelope(double d, double s_low);

/// Checks envelope >= |f| on every certification cell.
bool certify_envelope(const NormalizedCf& cf, const TailEnvelope& env);

/// Upper bound on 2 * (1/(2 pi)) * (pi/2) * integral_s^pi env(t)^n dt / t,
/// the one-sided (distribution function) tail contribution. The tilt uses
/// twice this.
double tail_integral_bound(const TailEnvelope& env, std::int64_t n, double s);

/// 1/2 - I0 from the contour-integral representation of P(X[n] < n mean),
/// evaluated by adaptive Gauss-Kronrod quadrature.
double prob_below_mean_integral(const Die& d, std::int64_t n);

}  // namespace edgetilt
