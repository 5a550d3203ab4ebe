// Acceptance gate: one PASS/FAIL line per criterion. Run with
// `--criterion k` to evaluate a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "edgetilt/asymptopia.hpp"
#include "edgetilt/bounds.hpp"
#include "edgetilt/cf.hpp"
#include "edgetilt/exact_dist.hpp"
#include "oracles.hpp"

using namespace edgetilt;

namespace {

constexpr double kPi = std::numbers::pi;

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    std::printf("    %s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    ok_ = ok_ && ok;
  }
  void note(const std::string& what) { std::printf("    ..   %s\n", what.c_str()); }
  bool ok() const { return ok_; }

 private:
  bool ok_ = true;
};

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// Agreement to three significant figures of the printed value.
bool sig3(double ours, double printed) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(printed))) - 2);
  return std::abs(ours - printed) <= 0.5 * unit;
}

struct Analysis {
  DieSummary s;
  GlobalConstants gc;
  TailBound cert;

  explicit Analysis(const Die& d)
      : s(summarize(d)), gc(global_constants(s)), cert(*TailBound::make(s, gc, TailMode::kCert)) {}
};

// Sampled n beyond n2 in the class: 50 consecutive members, then 50
// geometrically spaced ones up to about 10^8.
std::vector<std::int64_t> beyond(std::int64_t n2v, std::int64_t b) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 1; k <= 50; ++k) out.push_back(n2v + k * b);
  double x = static_cast<double>(n2v + 51 * b);
  const double ratio = std::pow(1e8 / x, 1.0 / 50.0);
  for (int k = 0; k < 50; ++k) {
    x *= ratio;
    const auto n = static_cast<std::int64_t>(x);
    out.push_back(n - ((n - n2v) % b + b) % b);
  }
  return out;
}

bool bound_holds_beyond(const Analysis& a, const ClassConstants& cc, std::int64_t n2v,
                        const TailBound& tail) {
  for (std::int64_t n : beyond(n2v, a.gc.span)) {
    const BoundTerms bt = error_bound_terms(a.gc, cc, n, tail);
    if (!(bt.scale() * bt.total() < std::abs(cc.L_tilt))) return false;
  }
  return true;
}

// 1. X table.
bool criterion_x_table(Check& ck) {
  const Analysis x(corpus::die(corpus::kX));
  const std::vector<double> L{-0.16446, 0.43856, -0.16446, -0.76748};
  const std::vector<std::int64_t> n1s{59, 9, 59, 3};
  const std::vector<std::int64_t> n2s{74, 37, 70, 27};
  for (std::int64_t c = 0; c < 4; ++c) {
    const auto i = static_cast<std::size_t>(c);
    const ClassConstants cc = class_constants(x.s, c);
    const std::int64_t v1 = n1(x.gc, cc);
    const std::int64_t v2 = n2(x.gc, cc, x.cert);
    const std::string tag = "X_" + std::to_string(c) + ": ";
    ck.expect(near(cc.L_tilt, L[i], 1e-4), tag + fmt("L = %.6f (reference %.5f)", cc.L_tilt, L[i]));
    ck.expect(v1 == n1s[i], tag + "n1 = " + std::to_string(v1) + " (reference " +
                                std::to_string(n1s[i]) + ")");
    ck.expect(std::abs(v2 - n2s[i]) <= 2,
              tag + "n2(cert) = " + std::to_string(v2) + " (reference " + std::to_string(n2s[i]) + ")");
    ck.expect(bound_holds_beyond(x, cc, v2, x.cert),
              tag + "sqrt(2 pi n) EB(n) < |L| at 100 sampled n beyond n2");
  }
  const DieReport rep = prove_all(corpus::die(corpus::kX));
  bool proven = true;
  std::string n0s;
  for (const auto& c : rep.classes) {
    proven = proven && c.status == ProofStatus::kProven;
    n0s += " " + (c.proven_n0 ? std::to_string(*c.proven_n0) : "-");
  }
  ck.expect(proven, "full analysis proves every class, n0 =" + n0s);
  return ck.ok();
}

// 2. Y constants, peaks and n2 in all tail modes.
bool criterion_y(Check& ck) {
  const Analysis y(corpus::die(corpus::kY));
  const ClassConstants cc = class_constants(y.s, 0);
  ck.expect(near(cc.L_tilt, -0.040422, 1e-5), fmt("L = %.7f (reference -0.040422)", cc.L_tilt));
  ck.expect(y.s.moments.mu2() == 68, "mu2 = " + y.s.moments.mu2().get_str() + " exactly");

  const CfProfile prof = peak_profile(y.s.canonical.die);
  const std::vector<double> heights{1,       0.88989, 0.99645, 0.89768, 0.98621,
                                    0.91204, 0.97048, 0.93077, 0.95118};
  bool peaks_ok = prof.peaks.size() == heights.size();
  for (std::size_t i = 0; peaks_ok && i < heights.size(); ++i) {
    peaks_ok = near(prof.peaks[i].height, heights[i], 1e-4);
  }
  std::string list;
  for (const auto& p : prof.peaks) list += fmt(" %.5f", p.height);
  ck.expect(peaks_ok, std::to_string(prof.peaks.size()) + " peaks:" + list);

  ck.expect(near(y.gc.d_cert, 0.0028144, 1e-6), fmt("d_cert = %.8f (reference 0.0028144)", y.gc.d_cert));
  const double ropt = r_optimal(y.s.canonical.die);
  ck.expect(near(ropt, 0.0055834, 1e-4), fmt("r_optimal = %.7f (reference 0.0055834)", ropt));

  const std::int64_t v1 = n1(y.gc, cc);
  ck.expect(v1 == 682, "n1 = " + std::to_string(v1) + " (reference 682)");
  const std::int64_t v_cert = n2(y.gc, cc, y.cert);
  ck.expect(std::abs(v_cert - 182024) <= 1, "n2(cert) = " + std::to_string(v_cert) + " (reference 182024)");
  const auto opt = TailBound::make(y.s, y.gc, TailMode::kOptimal);
  const std::int64_t v_opt = n2(y.gc, cc, *opt);
  ck.expect(std::abs(v_opt - 88181) <= 50, "n2(optimal) = " + std::to_string(v_opt) + " (reference 88181)");
  const auto env = TailBound::make(y.s, y.gc, TailMode::kEnvelope);
  ck.expect(env.has_value(), "envelope certified");
  if (env) {
    const std::int64_t v_env = n2(y.gc, cc, *env);
    ck.expect(v_env <= 2000, "n2(envelope) = " + std::to_string(v_env) + " (reference 1455, bound 2000)");
    ck.expect(bound_holds_beyond(y, cc, v_env, *env), "envelope bound holds at 100 sampled n beyond");
  }
  return ck.ok();
}

// 3. Exact Y tilts and the proof of n0 = 761.
bool criterion_y_exact(Check& ck) {
  const Die y = corpus::die(corpus::kY);
  const std::vector<std::pair<std::int64_t, double>> spots{
      {759, 0.000439}, {760, 0.001195}, {761, -0.003066}, {762, -0.011796},
      {776, -0.007300}, {777, -0.002028}, {778, -0.001415}, {779, -0.005505}};
  const auto series = tilt_series(y, 759, 779);
  for (const auto& [n, printed] : spots) {
    const double v = series[static_cast<std::size_t>(n - 759)].normalized;
    ck.expect(near(v, printed, 1e-6), "n = " + std::to_string(n) + fmt(": %.9f (reference %.6f)", v, printed));
  }
  const ClassReport rep = prove_class(y, 0);
  ck.expect(rep.status == ProofStatus::kProven, std::string("status ") + to_string(rep.status));
  ck.expect(rep.proof_mode == TailMode::kEnvelope,
            "scan reached the envelope-mode n2 = " + std::to_string(rep.scan_max));
  ck.expect(rep.proven_n0 == 761,
            "proven n0 = " + (rep.proven_n0 ? std::to_string(*rep.proven_n0) : "none") + " (reference 761)");
  return ck.ok();
}

void show_tilts(Check& ck, const std::string& name, const Die& d, std::int64_t upto) {
  for (const auto& tv : tilt_series(d, 1, upto)) {
    ck.note(name + " T_" + std::to_string(tv.n) + " = " + tv.tilt.get_str());
  }
}

// 4. Gardner dice.
bool criterion_gardner(Check& ck) {
  const Die a = corpus::die(corpus::kGardnerA);
  const Die b = corpus::die(corpus::kGardnerB);
  const Die c = corpus::die(corpus::kGardnerC);
  ck.expect(difference(a, b) == difference(b, c), "difference(A,B) == difference(B,C)");

  const Die u = difference(a, b);
  const Die w = difference(c, a);
  const Analysis au(u);
  const Analysis aw(w);
  const ClassConstants cu = class_constants(au.s, 0);
  const ClassConstants cw = class_constants(aw.s, 0);
  const std::int64_t u_n1 = n1(au.gc, cu);
  const std::int64_t w_n1 = n1(aw.gc, cw);
  const std::int64_t u_n2 = n2(au.gc, cu, au.cert);
  const std::int64_t w_n2 = n2(aw.gc, cw, aw.cert);

  ck.expect(near(cu.L_tilt, -0.14028, 1e-4), fmt("U = A-B: L = %.6f (reference -0.14028)", cu.L_tilt));
  ck.expect(u_n1 == 83, "U = A-B: n1 = " + std::to_string(u_n1) + " (reference 83)");
  ck.expect(near(cw.L_tilt, 0.03333, 1e-4), fmt("W = C-A: L = %.6f (reference 0.03333)", cw.L_tilt));
  ck.expect(w_n1 == 1407, "W = C-A: n1 = " + std::to_string(w_n1) + " (reference 1407)");
  ck.expect(std::abs(w_n2 - 4591) <= 2, "W = C-A: n2(cert) = " + std::to_string(w_n2) + " (reference 4591)");

  const DieReport ru = prove_all(u);
  const DieReport rw = prove_all(w);
  const auto n0u = ru.classes[0].proven_n0;
  const auto n0w = rw.classes[0].proven_n0;
  ck.expect(n0u.has_value() && n0w.has_value(), "proven n0 computed for U and W");
  ck.note("U = A-B: proven n0 = " + (n0u ? std::to_string(*n0u) : "none") +
          " (reference 9), scan to n = " + std::to_string(ru.classes[0].scan_max));
  ck.note("W = C-A: proven n0 = " + (n0w ? std::to_string(*n0w) : "none") +
          " (reference 5), scan to n = " + std::to_string(rw.classes[0].scan_max));
  show_tilts(ck, "U", u, 10);
  show_tilts(ck, "W", w, 6);

  // The printed L, n1 and n2 columns are reproduced with the two die labels
  // exchanged; reported for diagnosis, not counted.
  ck.note(fmt("C-A: L = %.6f, n1 = %.0f", cw.L_tilt, static_cast<double>(w_n1)) +
          ", n2(cert) = " + std::to_string(w_n2) + " ; A-B: " +
          fmt("L = %.6f, n1 = %.0f", cu.L_tilt, static_cast<double>(u_n1)) +
          ", n2(cert) = " + std::to_string(u_n2));
  ck.note("A-B dominance: A beats B asymptotically (L > 0); C-A: A beats C (L < 0)");
  return ck.ok();
}

// 5. Bound soundness against exact tilts and probabilities.
bool criterion_soundness(Check& ck) {
  std::vector<corpus::Named> dice{{"X", corpus::die(corpus::kX)},
                                  {"Y", corpus::die(corpus::kY)},
                                  {"U", corpus::U()},
                                  {"W", corpus::W()},
                                  {"coin", corpus::die(corpus::kCoin)}};
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 20; ++i) {
    dice.push_back({"random" + std::to_string(i), oracle::random_die(rng, 3 + i % 2, -10, 10)});
  }

  std::int64_t checks = 0, violations = 0;
  for (const auto& [name, d] : dice) {
    const Analysis a(d);
    std::vector<TailBound> tails{a.cert};
    for (TailMode m : {TailMode::kOptimal, TailMode::kEnvelope}) {
      if (auto t = TailBound::make(a.s, a.gc, m)) tails.push_back(*t);
    }
    std::vector<ClassConstants> classes;
    for (std::int64_t c = 0; c < a.gc.span; ++c) classes.push_back(class_constants(a.s, c));

    SumConvolver conv(a.s.canonical.die);
    std::int64_t die_violations = 0;
    for (std::int64_t n = 1; n <= 500; ++n) {
      if (n > 1) conv.step();
      if (n < a.gc.n_min) continue;
      const ClassConstants& cc = classes[static_cast<std::size_t>(n % a.gc.span)];
      const auto sides = conv.side_counts();
      const BigInt& den = conv.current().denominator;
      const double t = Rational(sides.above - sides.below, den).get_d();
      const double below = Rational(sides.below, den).get_d();
      const double root = std::sqrt(2.0 * kPi * static_cast<double>(n));
      for (const auto& tail : tails) {
        checks += 2;
        if (std::abs(t - cc.L_tilt / root) > error_bound_tilt(a.gc, cc, n, tail)) ++die_violations;
        const double cdf = error_bound_cdf(a.gc, cc, n, s_max(a.gc, n), tail);
        if (std::abs(below - (0.5 - cc.L_minus / root)) > cdf) ++die_violations;
      }
    }
    violations += die_violations;
    if (die_violations > 0) ck.note(name + " (" + d.to_string() + "): " + std::to_string(die_violations) + " violations");
  }
  ck.expect(violations == 0, std::to_string(dice.size()) + " dice, " + std::to_string(checks) +
                                 " bound checks (tilt and distribution form, every tail mode), " +
                                 std::to_string(violations) + " violations");
  return ck.ok();
}

// 6. Quadrature of the integral representation against exact probabilities.
bool criterion_quadrature(Check& ck) {
  double worst = 0.0;
  for (const auto& [name, d] : corpus::all()) {
    for (std::int64_t n : {1, 2, 5, 10, 50}) {
      const double exact = prob_below_mean(d, n).get_d();
      const double quad = prob_below_mean_integral(d, n);
      worst = std::max(worst, std::abs(exact - quad));
      if (std::abs(exact - quad) > 1e-9) {
        ck.note(name + " n=" + std::to_string(n) + fmt(": exact %.15f, quadrature %.15f", exact, quad));
      }
    }
  }
  ck.expect(worst <= 1e-9, fmt("worst |exact - quadrature| = %.3e over 8 dice x 5 n", worst));
  return ck.ok();
}

// 7. Characteristic-function bounds at sampled points.
bool criterion_cf_bounds(Check& ck) {
  for (const auto& [name, d] : corpus::all()) {
    const Analysis a(d);
    const Die& cd = a.s.canonical.die;
    bool quad_ok = true;
    for (int i = 0; i < 100000; ++i) {
      const double t = -kPi + 2.0 * kPi * (i + 0.5) / 100000.0;
      if (oracle::abs_cf(cd, t) > 1.0 - a.gc.d_cert * t * t + 1e-12) quad_ok = false;
    }
    const double s_low = 1.0 / a.gc.sigma_norm;
    bool env_ok = true;
    if (s_low < kPi) {
      const TailEnvelope env = build_envelope(cd, peak_profile(cd), s_low);
      env_ok = env.certified;
      for (int i = 0; i < 100000; ++i) {
        const double t = s_low + (kPi - s_low) * (i + 0.5) / 100000.0;
        if (env.eval(t) < oracle::abs_cf(cd, t) - 1e-12 || env.eval(t) > 1.0) env_ok = false;
      }
    }
    const double ropt = r_optimal(cd);
    ck.expect(quad_ok && env_ok && ropt >= a.gc.d_cert,
              name + fmt(": |f| <= 1 - d t^2 (d = %.6f), envelope >= |f|, r_optimal = %.6f", a.gc.d_cert, ropt));
  }
  return ck.ok();
}

// 8. Error-table rows for Y.
bool criterion_error_table(Check& ck) {
  const Analysis y(corpus::die(corpus::kY));
  const ClassConstants cc = class_constants(y.s, 0);
  struct Row {
    std::int64_t n;
    double eb, principal, tail;
  };
  const std::vector<Row> rows{{681, 1128.163, 0.0404310, 1128.122},
                              {682, 1127.289, 0.0404013, 1127.248},
                              {761, 1063.690, 0.0382468, 1063.652},
                              {182023, 0.040423, 0.0024730, 0.0379500},
                              {182024, 0.040421, 0.0024729, 0.0379483}};
  for (const Row& r : rows) {
    const ScaledBoundRow s = scaled_row(error_bound_terms(y.gc, cc, r.n, y.cert));
    char buf[200];
    std::snprintf(buf, sizeof buf, "n = %lld: EB %.7g / %.7g, 2q2/n %.7g / %.7g, tail %.7g / %.7g",
                  static_cast<long long>(r.n), s.total, r.eb, s.principal, r.principal, s.tail,
                  r.tail);
    ck.expect(sig3(s.total, r.eb) && sig3(s.principal, r.principal) && sig3(s.tail, r.tail), buf);
  }
  return ck.ok();
}

struct Criterion {
  const char* title;
  double time_limit_s;
  std::function<bool(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run only this criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"X-die table reproduction", 5, criterion_x_table},
      {"Y-die constants, peaks and n2", 60, criterion_y},
      {"Y exact tilts and proven n0", 600, criterion_y_exact},
      {"Gardner dice", 600, criterion_gardner},
      {"bound soundness suite", 1e9, criterion_soundness},
      {"integral representation cross-check", 1e9, criterion_quadrature},
      {"CF bound soundness", 1e9, criterion_cf_bounds},
      {"Y error-table rows", 1e9, criterion_error_table},
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (only != 0 && only != k) continue;
    const Criterion& c = criteria[i];
    std::printf("criterion %d: %s\n", k, c.title);
    Check ck;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s < 1e9) {
      ck.expect(secs < c.time_limit_s, fmt("runtime %.2f s (limit %.0f s)", secs, c.time_limit_s));
    }
    ok = ok && ck.ok();
    std::printf("[%s] criterion %d [PRIMARY] %s (%.2f s)\n", ok ? "PASS" : "FAIL", k, c.title, secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
