#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgetilt/asymptopia.hpp"
#include "edgetilt/bounds.hpp"
#include "edgetilt/cf.hpp"
#include "edgetilt/error.hpp"
#include "edgetilt/exact_dist.hpp"
#include "edgetilt/lattice.hpp"
#include "edgetilt/report.hpp"

namespace et = edgetilt;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitSymmetric = 4;

struct RunConfig {
  std::string die;
  std::string die2;
  std::optional<std::int64_t> residue;
  std::int64_t from = 1;
  std::int64_t to = 1;
  std::vector<std::int64_t> ns;
  std::string tail;
  std::string format = "table";
  std::string out;
  std::optional<std::size_t> budget_mb;
  int samples = 2000;
};

et::ProveOptions prove_options(const RunConfig& cfg) {
  et::ProveOptions opts;
  if (cfg.budget_mb) opts.budget.max_bytes = *cfg.budget_mb << 20;
  if (!cfg.tail.empty()) opts.tail_mode = et::parse_tail_mode(cfg.tail);
  return opts;
}

int report_exit_code(const et::DieReport& rep) {
  int code = 0;
  for (const auto& c : rep.classes) {
    if (c.status == et::ProofStatus::kScanBudgetExceeded) code = kExitBudget;
    if (c.status == et::ProofStatus::kSymmetricUndetermined && code == 0) code = kExitSymmetric;
  }
  return code;
}

int emit_report(std::ostream& os, const RunConfig& cfg, const et::DieReport& rep) {
  if (cfg.format == "json") {
    os << et::to_json(rep).dump(2) << "\n";
  } else {
    et::write_report_table(os, rep);
  }
  return report_exit_code(rep);
}

int cmd_analyze(std::ostream& os, const RunConfig& cfg) {
  const et::Die d = et::parse_die(cfg.die);
  const et::ProveOptions opts = prove_options(cfg);
  if (cfg.residue) {
    et::DieReport rep;
    rep.die = d.to_string();
    const auto ls = et::certificate(et::canonicalize(d).die);
    rep.span = ls.span;
    rep.shift = ls.shift;
    rep.classes.push_back(et::prove_class(d, *cfg.residue, opts));
    return emit_report(os, cfg, rep);
  }
  return emit_report(os, cfg, et::prove_all(d, opts));
}

int cmd_dominance(std::ostream& os, const RunConfig& cfg) {
  const et::Die a = et::parse_die(cfg.die);
  const et::Die b = et::parse_die(cfg.die2);
  const et::DominanceReport dr = et::dominance(a, b, prove_options(cfg));
  if (cfg.format == "json") {
    nlohmann::json j = et::to_json(dr.report);
    j["winner"] = dr.winner;
    os << j.dump(2) << "\n";
  } else {
    et::write_report_table(os, dr.report);
    for (std::size_t i = 0; i < dr.winner.size(); ++i) {
      const char* who = dr.winner[i] > 0 ? "first die" : dr.winner[i] < 0 ? "second die" : "undetermined";
      os << "class " << i << ": " << who << "\n";
    }
  }
  return report_exit_code(dr.report);
}

int cmd_tilt(std::ostream& os, const RunConfig& cfg) {
  const et::Die d = et::parse_die(cfg.die);
  std::optional<et::ResidueFilter> filter;
  if (cfg.residue) {
    filter = et::ResidueFilter{et::certificate(et::canonicalize(d).die).span, *cfg.residue};
  }
  et::Budget budget;
  if (cfg.budget_mb) budget.max_bytes = *cfg.budget_mb << 20;
  const auto series = et::tilt_series(d, cfg.from, cfg.to, filter, budget);
  if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& tv : series) {
      j.push_back({{"n", tv.n}, {"tilt", tv.tilt.get_str()}, {"normalized", tv.normalized}});
    }
    os << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    et::write_tilt_csv(os, series);
  } else {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%8s  %12s\n", "n", "sqrt(2pin)T");
    os << buf;
    for (const auto& tv : series) {
      std::snprintf(buf, sizeof buf, "%8lld  %12s\n", static_cast<long long>(tv.n),
                    et::truncated(tv.normalized, 6).c_str());
      os << buf;
    }
  }
  return 0;
}

int cmd_cf(std::ostream& os, const RunConfig& cfg) {
  const et::Die d = et::parse_die(cfg.die);
  if (cfg.format == "csv") {
    et::write_cf_samples_csv(os, d, cfg.samples);
    return 0;
  }
  const et::DieSummary s = et::summarize(d);
  const et::GlobalConstants gc = et::global_constants(s);
  const et::CfProfile profile = et::peak_profile(s.canonical.die);
  const et::TailEnvelope env =
      et::build_envelope(s.canonical.die, profile, 1.0 / gc.sigma_norm);
  const double r_opt = et::r_optimal(s.canonical.die);
  if (cfg.format == "json") {
    nlohmann::json j = {{"lattice", et::to_json(s.lattice)},
                        {"d_cert", gc.d_cert},
                        {"r_optimal", r_opt},
                        {"profile", et::to_json(profile)},
                        {"envelope", et::to_json(env)}};
    os << j.dump(2) << "\n";
    return 0;
  }
  os << "span " << gc.span << ", d_cert " << et::truncated(gc.d_cert, 7) << ", r_optimal "
     << et::truncated(r_opt, 7) << "\n";
  os << "peaks of |f| on [0, pi]:\n";
  for (const auto& p : profile.peaks) {
    os << "  t = " << et::truncated(p.t, 6) << "  height " << et::truncated(p.height, 5) << "\n";
  }
  os << "envelope on [" << et::truncated(env.s_low, 6) << ", pi]"
     << (env.certified ? " (certified)" : " (not certified)") << ":\n";
  for (const auto& p : env.pieces) {
    os << "  [" << et::truncated(p.lo, 6) << ", " << et::truncated(p.hi, 6) << "] ";
    if (p.kind == et::EnvelopePiece::Kind::kConstant) {
      os << "constant " << et::truncated(p.height, 6) << "\n";
    } else {
      os << et::truncated(p.height, 6) << " * (1 - " << et::truncated(p.curvature, 3)
         << " (t - " << et::truncated(p.center, 6) << ")^2)\n";
    }
  }
  return 0;
}

int cmd_bounds(std::ostream& os, const RunConfig& cfg) {
  const et::Die d = et::parse_die(cfg.die);
  const et::DieSummary s = et::summarize(d);
  const et::GlobalConstants gc = et::global_constants(s);
  const et::TailMode mode =
      cfg.tail.empty() ? et::TailMode::kCert : *et::parse_tail_mode(cfg.tail);
  const auto tail = et::TailBound::make(s, gc, mode);
  if (!tail) {
    throw et::Error(et::ErrorKind::kInvalidArgument,
                    std::string("tail mode ") + et::to_string(mode) + " cannot be certified");
  }
  std::vector<std::int64_t> ns = cfg.ns;
  if (ns.empty()) {
    for (std::int64_t n = cfg.from; n <= cfg.to; ++n) ns.push_back(n);
  }

  std::vector<et::ScaledBoundRow> rows;
  std::vector<std::string> errors;
  for (std::int64_t n : ns) {
    const std::int64_t c = ((n % gc.span) + gc.span) % gc.span;
    const et::ClassConstants cc = et::class_constants(s, c);
    try {
      rows.push_back(et::scaled_row(et::error_bound_terms(gc, cc, n, *tail)));
      errors.emplace_back();
    } catch (const et::Error& e) {
      if (e.kind() != et::ErrorKind::kBelowValidityFloor) throw;
      rows.push_back({n, 0, 0, 0, 0});
      errors.emplace_back("below validity floor n_min=" + std::to_string(gc.n_min));
    }
  }

  if (cfg.format == "csv") {
    os << "n,total,principal,tail,rest,error\n";
    char buf[200];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (!errors[i].empty()) {
        os << r.n << ",,,,," << errors[i] << "\n";
        continue;
      }
      std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,\n",
                    static_cast<long long>(r.n), r.total, r.principal, r.tail, r.rest);
      os << buf;
    }
  } else if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (!errors[i].empty()) {
        j.push_back({{"n", r.n}, {"error", errors[i]}});
      } else {
        j.push_back({{"n", r.n},
                     {"total", r.total},
                     {"principal", r.principal},
                     {"tail", r.tail},
                     {"rest", r.rest}});
      }
    }
    os << j.dump(2) << "\n";
  } else {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%10s  %12s  %12s  %12s  %12s\n", "n", "EB", "2q2/n",
                  "tail", "rest");
    os << buf;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (!errors[i].empty()) {
        os << std::string(10 - std::min<std::size_t>(10, std::to_string(r.n).size()), ' ')
           << r.n << "  error: " << errors[i] << "\n";
        continue;
      }
      std::snprintf(buf, sizeof buf, "%10lld  %12s  %12s  %12s  %12s\n",
                    static_cast<long long>(r.n), et::truncated(r.total, 6).c_str(),
                    et::truncated(r.principal, 6).c_str(), et::truncated(r.tail, 6).c_str(),
                    et::truncated(r.rest, 6).c_str());
      os << buf;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tilts, explicit Edgeworth bounds and asymptopia proofs for dice"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--die", cfg.die, "die as value:prob pairs or a generating function")
        ->required();
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--out", cfg.out, "write output to this file");
    sub->add_option("--budget-mb", cfg.budget_mb, "memory budget for exact convolution");
  };
  auto add_tail = [&](CLI::App* sub) {
    sub->add_option("--tail", cfg.tail, "tail bound")
        ->check(CLI::IsMember({"cert", "optimal", "envelope"}));
  };

  auto* analyze = app.add_subcommand("analyze", "prove n0 for every residue class");
  add_common(analyze);
  add_tail(analyze);
  analyze->add_option("--class", cfg.residue, "only this residue class");

  auto* tilt = app.add_subcommand("tilt", "exact tilt series");
  add_common(tilt);
  tilt->add_option("--class", cfg.residue, "only n in this residue class");
  tilt->add_option("--from", cfg.from, "first n")->check(CLI::PositiveNumber);
  tilt->add_option("--to", cfg.to, "last n")->required()->check(CLI::PositiveNumber);

  auto* cf = app.add_subcommand("cf", "characteristic function profile");
  add_common(cf);
  cf->add_option("--samples", cfg.samples, "number of |f| samples for csv output")
      ->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("bounds", "error bound decomposition per n");
  add_common(bounds);
  add_tail(bounds);
  bounds->add_option("--n", cfg.ns, "values of n");
  bounds->add_option("--from", cfg.from, "first n")->check(CLI::PositiveNumber);
  bounds->add_option("--to", cfg.to, "last n")->check(CLI::PositiveNumber);

  auto* dom = app.add_subcommand("dominance", "asymptotic dominance of --die over --die2");
  add_common(dom);
  add_tail(dom);
  dom->add_option("--die2", cfg.die2, "second die")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  std::ostringstream buffer;
  int code = 0;
  try {
    if (*analyze) code = cmd_analyze(buffer, cfg);
    else if (*tilt) code = cmd_tilt(buffer, cfg);
    else if (*cf) code = cmd_cf(buffer, cfg);
    else if (*bounds) code = cmd_bounds(buffer, cfg);
    else if (*dom) code = cmd_dominance(buffer, cfg);
  } catch (const et::Error& e) {
    std::cerr << "edgetilt: " << et::to_string(e.kind()) << ": " << e.what() << "\n";
    switch (e.kind()) {
      case et::ErrorKind::kParse:
      case et::ErrorKind::kInvalidDie:
      case et::ErrorKind::kDegenerate:
        return kExitParse;
      case et::ErrorKind::kBudgetExceeded:
        return kExitBudget;
      case et::ErrorKind::kSymmetricUndetermined:
        return kExitSymmetric;
      default:
        return 1;
    }
  }

  if (cfg.out.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      std::cerr << "edgetilt: cannot open " << cfg.out << "\n";
      return 1;
    }
    f << buffer.str();
  }
  return code;
}
