#include "edgetilt/asymptopia.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgetilt/error.hpp"

namespace edgetilt {

namespace {

std::int64_t first_index(std::int64_t residue, std::int64_t span) {
  return residue > 0 ? residue : span;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

const char* to_string(ProofStatus status) {
  switch (status) {
    case ProofStatus::kProven: return "proven";
    case ProofStatus::kSymmetricUndetermined: return "symmetric_undetermined";
    case ProofStatus::kScanBudgetExceeded: return "scan_budget_exceeded";
  }
  return "unknown";
}

std::optional<ProofStatus> parse_proof_status(std::string_view text) {
  if (text == "proven") return ProofStatus::kProven;
  if (text == "symmetric_undetermined") return ProofStatus::kSymmetricUndetermined;
  if (text == "scan_budget_exceeded") return ProofStatus::kScanBudgetExceeded;
  return std::nullopt;
}

std::optional<std::int64_t> N2Set::get(TailMode mode) const {
  switch (mode) {
    case TailMode::kCert: return cert;
    case TailMode::kOptimal: return optimal;
    case TailMode::kEnvelope: return envelope;
  }
  return std::nullopt;
}

void N2Set::set(TailMode mode, std::int64_t value) {
  switch (mode) {
    case TailMode::kCert: cert = value; break;
    case TailMode::kOptimal: optimal = value; break;
    case TailMode::kEnvelope: envelope = value; break;
  }
}

ScaledBoundRow scaled_row(const BoundTerms& bt) {
  const double k = bt.scale();
  return {bt.n, k * bt.total(), k * bt.principal(), k * bt.tail(), k * bt.rest()};
}

std::vector<TailBound> available_tails(const DieSummary& s, const GlobalConstants& gc,
                                       const ProveOptions& opts) {
  std::vector<TailBound> tails;
  for (TailMode mode : {TailMode::kCert, TailMode::kOptimal, TailMode::kEnvelope}) {
    if (opts.tail_mode && mode != *opts.tail_mode && mode != TailMode::kCert) continue;
    if (auto t = TailBound::make(s, gc, mode)) tails.push_back(std::move(*t));
  }
  return tails;
}

ClassReport bound_class(const DieSummary& s, const GlobalConstants& gc,
                        const std::vector<TailBound>& tails, std::int64_t residue,
                        const ProveOptions& opts) {
  const ClassConstants cc = class_constants(s, residue);
  ClassReport rep;
  rep.residue = residue;
  rep.L_tilt = cc.L_tilt;
  rep.L_minus = cc.L_minus;
  if (cc.symmetric) {
    rep.status = ProofStatus::kSymmetricUndetermined;
    return rep;
  }
  rep.n1 = n1(gc, cc);

  const TailBound* best = nullptr;
  for (const auto& tail : tails) {
    std::int64_t value = 0;
    try {
      value = n2(gc, cc, tail, opts.search_cap);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSearchCapExceeded) throw;
      continue;
    }
    rep.n2.set(tail.mode(), value);
    const bool eligible = !opts.tail_mode || tail.mode() == *opts.tail_mode;
    if (eligible && (!best || value < *rep.n2.get(best->mode()))) best = &tail;
  }
  if (!best) {
    throw Error(ErrorKind::kSearchCapExceeded,
                "no tail mode gives an n2 below the search cap for residue " +
                    std::to_string(residue));
  }
  rep.proof_mode = best->mode();
  rep.scan_max = *rep.n2.get(best->mode());

  const std::int64_t n2v = rep.scan_max;
  for (std::int64_t n : {n2v - gc.span, n2v}) {
    if (n < gc.n_min) continue;
    rep.bound_decomposition_at.push_back(scaled_row(error_bound_terms(gc, cc, n, *best)));
  }
  return rep;
}

namespace {

// Every class gets constants and n2; only `only` (or all, when empty) is
// scanned.
DieReport prove_classes(const DieSummary& s, const ProveOptions& opts,
                        std::optional<std::int64_t> only) {
  const GlobalConstants gc = global_constants(s);
  const std::vector<TailBound> tails = available_tails(s, gc, opts);

  DieReport out;
  out.die = s.original.to_string();
  out.span = gc.span;
  out.shift = gc.shift;
  for (std::int64_t c = 0; c < gc.span; ++c) {
    out.classes.push_back(bound_class(s, gc, tails, c, opts));
  }
  auto scanned = [&](const ClassReport& rep) {
    return rep.status == ProofStatus::kProven && (!only || rep.residue == *only);
  };

  SumConvolver conv(s.canonical.die, opts.budget);
  std::int64_t target = 0;
  for (auto& rep : out.classes) {
    if (!scanned(rep)) continue;
    try {
      conv.reserve_to(rep.scan_max);
      target = std::max(target, rep.scan_max);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBudgetExceeded) throw;
      rep.status = ProofStatus::kScanBudgetExceeded;
    }
  }

  std::vector<std::int64_t> last_mismatch(out.classes.size(), 0);
  for (std::int64_t n = 1; n <= target; ++n) {
    if (n > 1) conv.step();
    auto& rep = out.classes[static_cast<std::size_t>(n % gc.span)];
    if (!scanned(rep) || n > rep.scan_max) continue;
    const auto sides = conv.side_counts();
    const int tilt_sign = sgn(sides.above - sides.below);
    if (tilt_sign == 0) rep.zero_tilts.push_back(n);
    if (tilt_sign != sign_of(rep.L_tilt)) last_mismatch[static_cast<std::size_t>(rep.residue)] = n;
  }

  for (auto& rep : out.classes) {
    if (!scanned(rep)) continue;
    const std::int64_t miss = last_mismatch[static_cast<std::size_t>(rep.residue)];
    rep.proven_n0 = miss > 0 ? miss + gc.span : first_index(rep.residue, gc.span);
  }
  return out;
}

}  // namespace

ClassReport prove_class(const Die& d, std::int64_t residue, const ProveOptions& opts) {
  const DieSummary s = summarize(d);
  if (residue < 0 || residue >= s.lattice.span) {
    throw Error(ErrorKind::kInvalidArgument,
                "residue " + std::to_string(residue) + " outside [0, " +
                    std::to_string(s.lattice.span) + ")");
  }
  DieReport all = prove_classes(s, opts, residue);
  return all.classes.at(static_cast<std::size_t>(residue));
}

DieReport prove_all(const Die& d, const ProveOptions& opts) {
  return prove_classes(summarize(d), opts, std::nullopt);
}

DominanceReport dominance(const Die& a, const Die& b, const ProveOptions& opts) {
  DominanceReport dr{difference(a, b), {}, {}};
  dr.report = prove_all(dr.difference, opts);
  for (const auto& rep : dr.report.classes) {
    dr.winner.push_back(rep.status == ProofStatus::kSymmetricUndetermined ? 0
                                                                           : sign_of(rep.L_tilt));
  }
  return dr;
}

}  // namespace edgetilt
