#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "edgetilt/cf.hpp"
#include "edgetilt/die.hpp"
#include "edgetilt/lattice.hpp"

namespace edgetilt {

/// Everything the bounds need about a die, computed once on its canonical
/// (mean zero, integer valued) form.
struct DieSummary {
  Die original;
  CanonicalDie canonical;
  LatticeStructure lattice;
  MomentSet moments;
};

DieSummary summarize(const Die& d);

struct GlobalConstants {
  double p0 = 0.0;
  double p1 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q4 = 0.0;
  double r = 0.0;       // certificate-based scale-invariant coefficient
  double d_cert = 0.0;  // same bound for the span-normalized die
  double sigma = 0.0;
  double sigma_norm = 0.0;  // sigma / span
  double nu3 = 0.0;
  double nu4 = 0.0;
  std::int64_t span = 1;
  std::int64_t shift = 0;
  std::int64_t n_min = 1;
};

GlobalConstants global_constants(const DieSummary& s);

struct ClassConstants {
  std::int64_t residue = 0;
  double beta = 0.0;
  double q3 = 0.0;
  double q5 = 0.0;
  double L_tilt = 0.0;
  double L_minus = 0.0;
  bool symmetric = false;  // L_tilt is exactly zero
};

/// Constants for n = residue (mod span).
ClassConstants class_constants(const DieSummary& s, std::int64_t residue);

enum class TailMode { kCert, kOptimal, kEnvelope };

const char* to_string(TailMode mode);
std::optional<TailMode> parse_tail_mode(std::string_view text);

/// Source of the characteristic-function tail term: either the quadratic
/// bound |g(t)| <= 1 - r t^2 / 2 or a certified envelope.
class TailBound {
 public:
  static TailBound quadratic(TailMode mode, double r);
  static TailBound from_envelope(TailEnvelope env);

  /// Builds the tail for `mode`. For kEnvelope, returns nullopt when no
  /// envelope below 1 can be certified.
  static std::optional<TailBound> make(const DieSummary& s, const GlobalConstants& gc,
                                       TailMode mode);

  TailMode mode() const { return mode_; }
  double r() const { return r_; }
  const TailEnvelope* envelope() const { return env_ ? &*env_ : nullptr; }

  /// Replacement for e^{-nr/2} / (nr) in the tilt bound.
  double tilt_term(std::int64_t n) const;
  /// Smallest n from which sqrt(n) * tilt_term(n) is nonincreasing.
  std::int64_t monotone_from() const;

 private:
  TailMode mode_ = TailMode::kCert;
  double r_ = 0.0;
  std::optional<TailEnvelope> env_;
};

/// The seven terms of the tilt error bound, unscaled.
struct BoundTerms {
  std::int64_t n = 0;
  std::array<double, 7> terms{};

  double total() const;
  double principal() const { return terms[0]; }
  double tail() const { return terms[1]; }
  double rest() const;
  double scale() const;  // sqrt(2 pi n)
};

/// Throws Error(kBelowValidityFloor) if n < gc.n_min and
/// Error(kInvalidArgument) if n is not in the class of `cc`.
BoundTerms error_bound_terms(const GlobalConstants& gc, const ClassConstants& cc,
                             std::int64_t n, const TailBound& tail);

double error_bound_tilt(const GlobalConstants& gc, const ClassConstants& cc, std::int64_t n,
                        const TailBound& tail);

/// min(1, pi sigma_norm / 3, (q1 n)^{-1/4}).
double s_max(const GlobalConstants& gc, std::int64_t n);

/// Bound on |E-| in P(X[n] < n mean) = 1/2 - L_minus / sqrt(2 pi n) + E-.
/// Throws Error(kInvalidArgument) if s is not in (0, s_max(n)].
double error_bound_cdf(const GlobalConstants& gc, const ClassConstants& cc, std::int64_t n,
                       double s, const TailBound& tail);

/// ceil(8 pi q2^2 / L^2). Throws Error(kSymmetricUndetermined) if L is zero.
std::int64_t n1(const GlobalConstants& gc, const ClassConstants& cc);

inline constexpr std::int64_t kDefaultSearchCap = 1'000'000'000;

/// Smallest n in the class, n >= n_min, such that sqrt(2 pi n) EB(m) < |L|
/// for every m >= n in the class.
std::int64_t n2(const GlobalConstants& gc, const ClassConstants& cc, const TailBound& tail,
                std::int64_t cap = kDefaultSearchCap);

}  // namespace edgetilt
