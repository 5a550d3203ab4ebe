#include "edgetilt/exact_dist.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "edgetilt/error.hpp"
#include "edgetilt/lattice.hpp"

namespace edgetilt {

Rational SumPmf::prob(std::int64_t value) const {
  const std::int64_t rel = value - min_value;
  if (rel < 0 || rel % stride != 0) return 0;
  const auto i = static_cast<std::size_t>(rel / stride);
  if (i >= weights.size()) return 0;
  Rational q(weights[i], denominator);
  q.canonicalize();
  return q;
}

bool ResidueFilter::accepts(std::int64_t n) const {
  std::int64_t r = n % modulus;
  if (r < 0) r += modulus;
  return r == residue;
}

double to_double(const Rational& q) { return q.get_d(); }

SumConvolver::SumConvolver(const Die& d, Budget budget)
    : mean_(d.mean()), budget_(budget) {
  const std::int64_t stride = span_shift(d).span;
  base_den_ = 1;
  for (const auto& o : d.outcomes()) {
    mpz_lcm(base_den_.get_mpz_t(), base_den_.get_mpz_t(), o.prob.get_den().get_mpz_t());
  }
  for (const auto& o : d.outcomes()) {
    KernelTerm k;
    k.offset = static_cast<std::size_t>((o.value - d.min_value()) / stride);
    k.weight = o.prob.get_num() * (base_den_ / o.prob.get_den());
    k.small = k.weight.fits_ulong_p();
    k.small_weight = k.small ? k.weight.get_ui() : 0;
    kernel_.push_back(std::move(k));
  }
  width_ = kernel_.back().offset;

  base_min_ = d.min_value();
  pmf_.n = 1;
  pmf_.min_value = d.min_value();
  pmf_.stride = stride;
  pmf_.denominator = base_den_;
  pmf_.weights.assign(width_ + 1, BigInt(0));
  for (const auto& k : kernel_) pmf_.weights[k.offset] = k.weight;
}

std::size_t SumConvolver::projected_bytes(std::int64_t n) const {
  const double bits = static_cast<double>(mpz_sizeinbase(base_den_.get_mpz_t(), 2)) *
                      static_cast<double>(n);
  const double entry = bits / 8.0 + 2.0 * sizeof(BigInt) + 16.0;
  const double support = static_cast<double>(width_) * static_cast<double>(n) + 1.0;
  const double bytes = 2.0 * support * entry;
  if (bytes > static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
    return std::numeric_limits<std::size_t>::max() / 2;
  }
  return static_cast<std::size_t>(bytes);
}

void SumConvolver::reserve_to(std::int64_t n) const {
  if (n > budget_.max_steps) {
    throw Error(ErrorKind::kBudgetExceeded,
                "exact convolution to n=" + std::to_string(n) + " exceeds the step budget of " +
                    std::to_string(budget_.max_steps));
  }
  if (projected_bytes(n) > budget_.max_bytes) {
    throw Error(ErrorKind::kBudgetExceeded,
                "exact convolution to n=" + std::to_string(n) + " needs about " +
                    std::to_string(projected_bytes(n) >> 20) + " MiB, budget is " +
                    std::to_string(budget_.max_bytes >> 20) + " MiB");
  }
}

void SumConvolver::step() {
  reserve_to(pmf_.n + 1);
  const auto& cur = pmf_.weights;
  const std::size_t out_size = cur.size() + width_;
  scratch_.resize(out_size);
  for (auto& w : scratch_) mpz_set_ui(w.get_mpz_t(), 0);

  for (const auto& k : kernel_) {
    for (std::size_t i = 0; i < cur.size(); ++i) {
      mpz_ptr out = scratch_[i + k.offset].get_mpz_t();
      if (k.small) {
        mpz_addmul_ui(out, cur[i].get_mpz_t(), k.small_weight);
      } else {
        mpz_addmul(out, cur[i].get_mpz_t(), k.weight.get_mpz_t());
      }
    }
  }
  pmf_.weights.swap(scratch_);
  pmf_.n += 1;
  pmf_.min_value += base_min_;
  pmf_.denominator *= base_den_;
}

SumConvolver::SideCounts SumConvolver::side_counts() const {
  // Support values increase with the index, so the points strictly below and
  // strictly above n * mean form a prefix and a suffix.
  const Rational center = mean_ * pmf_.n;
  const std::size_t size = pmf_.weights.size();
  auto first_not_below = [&] {
    std::size_t lo = 0, hi = size;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (Rational(pmf_.value_at(mid)) < center) lo = mid + 1; else hi = mid;
    }
    return lo;
  }();
  std::size_t first_above = first_not_below;
  while (first_above < size && Rational(pmf_.value_at(first_above)) == center) ++first_above;

  SideCounts out{0, 0};
  for (std::size_t i = 0; i < first_not_below; ++i) out.below += pmf_.weights[i];
  for (std::size_t i = first_above; i < size; ++i) out.above += pmf_.weights[i];
  return out;
}

namespace {

SumConvolver advanced(const Die& d, std::int64_t n, Budget budget) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be at least 1");
  SumConvolver conv(d, budget);
  conv.reserve_to(n);
  while (conv.current().n < n) conv.step();
  return conv;
}

TiltValue make_tilt(const SumConvolver& conv) {
  const auto sides = conv.side_counts();
  TiltValue tv;
  tv.n = conv.current().n;
  tv.tilt = Rational(sides.above - sides.below, conv.current().denominator);
  tv.tilt.canonicalize();
  tv.normalized = std::sqrt(2.0 * std::numbers::pi * static_cast<double>(tv.n)) *
                  to_double(tv.tilt);
  return tv;
}

}  // namespace

SumPmf sum_pmf(const Die& d, std::int64_t n, Budget budget) {
  return advanced(d, n, budget).current();
}

TiltValue tilt(const Die& d, std::int64_t n, Budget budget) {
  return make_tilt(advanced(d, n, budget));
}

std::vector<TiltValue> tilt_series(const Die& d, std::int64_t n_from, std::int64_t n_to,
                                   std::optional<ResidueFilter> filter, Budget budget) {
  if (n_from < 1 || n_to < n_from) {
    throw Error(ErrorKind::kInvalidArgument, "tilt series needs 1 <= from <= to");
  }
  if (filter && (filter->modulus < 1 || filter->residue < 0 ||
                 filter->residue >= filter->modulus)) {
    throw Error(ErrorKind::kInvalidArgument, "residue filter needs 0 <= residue < modulus");
  }
  SumConvolver conv(d, budget);
  conv.reserve_to(n_to);
  std::vector<TiltValue> out;
  for (;;) {
    const std::int64_t n = conv.current().n;
    if (n >= n_from && (!filter || filter->accepts(n))) out.push_back(make_tilt(conv));
    if (n >= n_to) break;
    conv.step();
  }
  return out;
}

Rational prob_below_mean(const Die& d, std::int64_t n, Budget budget) {
  const auto conv = advanced(d, n, budget);
  Rational q(conv.side_counts().below, conv.current().denominator);
  q.canonicalize();
  return q;
}

}  // namespace edgetilt
