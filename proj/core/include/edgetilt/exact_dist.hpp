#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgetilt/die.hpp"

namespace edgetilt {

/// Limits on exact convolution work. Exceeding either is reported as
/// Error(kBudgetExceeded) before any work is done.
struct Budget {
  std::size_t max_bytes = std::size_t{2} << 30;
  std::int64_t max_steps = 1'000'000;
};

/// Exact PMF of the n-fold IID sum. Support points lie on the lattice
/// min_value + i * stride; weights[i] / denominator is the probability of
/// that point and the denominator is D^n with D the lcm of the outcome
/// denominators.
struct SumPmf {
  std::int64_t n = 0;
  std::int64_t min_value = 0;
  std::int64_t stride = 1;
  BigInt denominator;
  std::vector<BigInt> weights;

  std::int64_t value_at(std::size_t i) const {
    return min_value + static_cast<std::int64_t>(i) * stride;
  }
  Rational prob(std::int64_t value) const;
};

/// Incremental convolution: holds the PMF of X[n] and advances to X[n+1].
class SumConvolver {
 public:
  explicit SumConvolver(const Die& d, Budget budget = {});

  /// Throws if reaching `n` would break the budget.
  void reserve_to(std::int64_t n) const;
  void step();
  const SumPmf& current() const { return pmf_; }

  /// (P(S > n mean) - P(S < n mean)) and P(S < n mean) for the current n,
  /// as numerators over current().denominator.
  struct SideCounts {
    BigInt above;
    BigInt below;
  };
  SideCounts side_counts() const;

  /// Rough working-set size in bytes for the PMF of X[n].
  std::size_t projected_bytes(std::int64_t n) const;

 private:
  struct KernelTerm {
    std::size_t offset;
    BigInt weight;
    unsigned long small_weight;
    bool small;
  };

  std::vector<KernelTerm> kernel_;
  std::size_t width_ = 0;
  std::int64_t base_min_ = 0;
  BigInt base_den_;
  Rational mean_;
  Budget budget_;
  SumPmf pmf_;
  std::vector<BigInt> scratch_;
};

SumPmf sum_pmf(const Die& d, std::int64_t n, Budget budget = {});

struct TiltValue {
  std::int64_t n = 0;
  Rational tilt;
  double normalized = 0.0;  // sqrt(2 pi n) * tilt
};

TiltValue tilt(const Die& d, std::int64_t n, Budget budget = {});

struct ResidueFilter {
  std::int64_t modulus;
  std::int64_t residue;

  bool accepts(std::int64_t n) const;
};

/// Exact tilts for n in [n_from, n_to] (optionally only one residue class),
/// from a single convolution sweep.
std::vector<TiltValue> tilt_series(const Die& d, std::int64_t n_from, std::int64_t n_to,
                                   std::optional<ResidueFilter> filter = std::nullopt,
                                   Budget budget = {});

/// P(X[n] < n * mean) exactly.
Rational prob_below_mean(const Die& d, std::int64_t n, Budget budget = {});

/// Converts an exact rational to double by truncating the quotient, with
/// relative error below 2^-52.
double to_double(const Rational& q);

}  // namespace edgetilt
