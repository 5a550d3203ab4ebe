#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgetilt/bounds.hpp"
#include "edgetilt/exact_dist.hpp"

namespace edgetilt {

enum class ProofStatus { kProven, kSymmetricUndetermined, kScanBudgetExceeded };

const char* to_string(ProofStatus status);
std::optional<ProofStatus> parse_proof_status(std::string_view text);

struct N2Set {
  std::optional<std::int64_t> cert;
  std::optional<std::int64_t> optimal;
  std::optional<std::int64_t> envelope;

  std::optional<std::int64_t> get(TailMode mode) const;
  void set(TailMode mode, std::int64_t value);

  friend bool operator==(const N2Set&, const N2Set&) = default;
};

/// One row of the error-table layout, every column multiplied by sqrt(2 pi n).
struct ScaledBoundRow {
  std::int64_t n = 0;
  double total = 0.0;
  double principal = 0.0;
  double tail = 0.0;
  double rest = 0.0;

  friend bool operator==(const ScaledBoundRow&, const ScaledBoundRow&) = default;
};

ScaledBoundRow scaled_row(const BoundTerms& bt);

struct ClassReport {
  std::int64_t residue = 0;
  double L_tilt = 0.0;
  double L_minus = 0.0;
  std::optional<std::int64_t> n1;
  N2Set n2;
  std::optional<TailMode> proof_mode;  // mode whose n2 the scan reached
  std::optional<std::int64_t> proven_n0;
  std::vector<std::int64_t> zero_tilts;
  std::int64_t scan_max = 0;
  ProofStatus status = ProofStatus::kProven;
  std::vector<ScaledBoundRow> bound_decomposition_at;

  friend bool operator==(const ClassReport&, const ClassReport&) = default;
};

struct DieReport {
  std::string die;
  std::int64_t span = 1;
  std::int64_t shift = 0;
  std::vector<ClassReport> classes;

  friend bool operator==(const DieReport&, const DieReport&) = default;
};

struct ProveOptions {
  Budget budget;
  /// Restricts the proof to one tail mode; by default the mode with the
  /// smallest n2 among those that certify is used.
  std::optional<TailMode> tail_mode;
  std::int64_t search_cap = kDefaultSearchCap;
};

/// Constants, n1 and n2 for every tail mode of one class, no exact scan.
ClassReport bound_class(const DieSummary& s, const GlobalConstants& gc,
                        const std::vector<TailBound>& tails, std::int64_t residue,
                        const ProveOptions& opts = {});

/// Tail bounds for the modes that apply to this die, in cert, optimal,
/// envelope order (envelope omitted when it cannot be certified).
std::vector<TailBound> available_tails(const DieSummary& s, const GlobalConstants& gc,
                                       const ProveOptions& opts = {});

ClassReport prove_class(const Die& d, std::int64_t residue, const ProveOptions& opts = {});

/// One report per residue class of the canonical die's span, sharing a
/// single exact convolution sweep.
DieReport prove_all(const Die& d, const ProveOptions& opts = {});

struct DominanceReport {
  Die difference;
  DieReport report;
  /// Per class: +1 if the first die wins asymptotically, -1 if the second
  /// does, 0 if undetermined.
  std::vector<int> winner;
};

DominanceReport dominance(const Die& a, const Die& b, const ProveOptions& opts = {});

}  // namespace edgetilt
