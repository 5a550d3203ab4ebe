#include "edgetilt/report.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "edgetilt/error.hpp"

namespace edgetilt {

using nlohmann::json;

namespace {

json optional_int(const std::optional<std::int64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::int64_t> read_optional_int(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::int64_t>();
}

std::string optional_text(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : std::string("-");
}

}  // namespace

std::string truncated(double x, int decimals) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals + 6, x);
  std::string s(buf);
  const auto dot = s.find('.');
  s.resize(decimals > 0 ? dot + 1 + static_cast<std::size_t>(decimals) : dot);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

json to_json(const ClassReport& rep, const std::string& die) {
  json rows = json::array();
  for (const auto& r : rep.bound_decomposition_at) {
    rows.push_back({{"n", r.n},
                    {"total", r.total},
                    {"principal", r.principal},
                    {"tail", r.tail},
                    {"rest", r.rest}});
  }
  return {
      {"die", die},
      {"class", rep.residue},
      {"L", rep.L_tilt},
      {"L_minus", rep.L_minus},
      {"n1", optional_int(rep.n1)},
      {"n2",
       {{"cert", optional_int(rep.n2.cert)},
        {"optimal", optional_int(rep.n2.optimal)},
        {"envelope", optional_int(rep.n2.envelope)}}},
      {"tail_mode", rep.proof_mode ? json(to_string(*rep.proof_mode)) : json(nullptr)},
      {"proven_n0", optional_int(rep.proven_n0)},
      {"zero_tilts", rep.zero_tilts},
      {"scan_max", rep.scan_max},
      {"status", to_string(rep.status)},
      {"bound_decomposition_at", rows},
  };
}

json to_json(const DieReport& rep) {
  json classes = json::array();
  for (const auto& c : rep.classes) classes.push_back(to_json(c, rep.die));
  return {{"die", rep.die}, {"span", rep.span}, {"shift", rep.shift}, {"classes", classes}};
}

DieReport die_report_from_json(const json& j) {
  try {
    DieReport rep;
    rep.die = j.at("die").get<std::string>();
    rep.span = j.at("span").get<std::int64_t>();
    rep.shift = j.at("shift").get<std::int64_t>();
    for (const auto& c : j.at("classes")) {
      ClassReport cr;
      cr.residue = c.at("class").get<std::int64_t>();
      cr.L_tilt = c.at("L").get<double>();
      cr.L_minus = c.at("L_minus").get<double>();
      cr.n1 = read_optional_int(c, "n1");
      const json& n2 = c.at("n2");
      cr.n2.cert = read_optional_int(n2, "cert");
      cr.n2.optimal = read_optional_int(n2, "optimal");
      cr.n2.envelope = read_optional_int(n2, "envelope");
      if (!c.at("tail_mode").is_null()) {
        cr.proof_mode = parse_tail_mode(c.at("tail_mode").get<std::string>());
        if (!cr.proof_mode) throw Error(ErrorKind::kParse, "unknown tail_mode");
      }
      cr.proven_n0 = read_optional_int(c, "proven_n0");
      cr.zero_tilts = c.at("zero_tilts").get<std::vector<std::int64_t>>();
      cr.scan_max = c.at("scan_max").get<std::int64_t>();
      const auto status = parse_proof_status(c.at("status").get<std::string>());
      if (!status) throw Error(ErrorKind::kParse, "unknown status");
      cr.status = *status;
      for (const auto& r : c.at("bound_decomposition_at")) {
        cr.bound_decomposition_at.push_back({r.at("n").get<std::int64_t>(),
                                             r.at("total").get<double>(),
                                             r.at("principal").get<double>(),
                                             r.at("tail").get<double>(),
                                             r.at("rest").get<double>()});
      }
      rep.classes.push_back(std::move(cr));
    }
    return rep;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("report JSON: ") + e.what());
  }
}

json to_json(const CfProfile& profile) {
  json peaks = json::array();
  for (const auto& p : profile.peaks) peaks.push_back({{"t", p.t}, {"height", p.height}});
  return {{"lipschitz", profile.lipschitz}, {"peaks", peaks}, {"troughs", profile.troughs}};
}

json to_json(const TailEnvelope& env) {
  json pieces = json::array();
  for (const auto& p : env.pieces) {
    json piece = {{"lo", p.lo}, {"hi", p.hi}, {"height", p.height}};
    if (p.kind == EnvelopePiece::Kind::kConstant) {
      piece["kind"] = "constant";
    } else {
      piece["kind"] = "parabola";
      piece["center"] = p.center;
      piece["curvature"] = p.curvature;
    }
    pieces.push_back(piece);
  }
  return {{"s_low", env.s_low},
          {"grid_step", env.grid_step},
          {"certified", env.certified},
          {"pieces", pieces}};
}

json to_json(const LatticeStructure& ls) {
  json cert = json::array();
  for (const auto& t : ls.certificate) {
    cert.push_back({{"value", t.value}, {"coefficient", t.coefficient}});
  }
  return {{"span", ls.span},
          {"shift", ls.shift},
          {"certificate", cert},
          {"C", ls.l1_norm},
          {"m", ls.min_prob.get_str()}};
}

void write_tilt_csv(std::ostream& os, const std::vector<TiltValue>& series) {
  os << "n,tilt_numerator,tilt_denominator,tilt_float,normalized\n";
  char buf[64];
  for (const auto& tv : series) {
    os << tv.n << ',' << tv.tilt.get_num().get_str() << ',' << tv.tilt.get_den().get_str();
    std::snprintf(buf, sizeof buf, ",%.17g", to_double(tv.tilt));
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g\n", tv.normalized);
    os << buf;
  }
}

void write_bounds_csv(std::ostream& os, const std::vector<ScaledBoundRow>& rows) {
  os << "n,total,principal,tail,rest\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.n), r.total, r.principal, r.tail, r.rest);
    os << buf;
  }
}

void write_cf_samples_csv(std::ostream& os, const Die& d, int count) {
  if (count < 1) throw Error(ErrorKind::kInvalidArgument, "sample count must be positive");
  const NormalizedCf cf(d);
  os << "t,abs_f\n";
  char buf[80];
  for (int i = 0; i <= count; ++i) {
    const double t = std::numbers::pi * i / count;
    std::snprintf(buf, sizeof buf, "%.12f,%.12f\n", t, cf.abs(t));
    os << buf;
  }
}

void write_report_table(std::ostream& os, const DieReport& rep) {
  os << "die: " << rep.die << "\n";
  os << "span " << rep.span << ", shift " << rep.shift << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s %-10s %-8s %-10s %-10s %-10s %-9s %s\n", "class",
                "L", "n1", "n2 cert", "n2 opt", "n2 env", "n0", "status");
  os << buf;
  for (const auto& c : rep.classes) {
    std::snprintf(buf, sizeof buf, "%-6lld %-10s %-8s %-10s %-10s %-10s %-9s %s\n",
                  static_cast<long long>(c.residue), truncated(c.L_tilt, 5).c_str(),
                  optional_text(c.n1).c_str(), optional_text(c.n2.cert).c_str(),
                  optional_text(c.n2.optimal).c_str(), optional_text(c.n2.envelope).c_str(),
                  optional_text(c.proven_n0).c_str(), to_string(c.status));
    os << buf;
    if (!c.zero_tilts.empty()) {
      os << "       zero tilts at n =";
      for (auto n : c.zero_tilts) os << ' ' << n;
      os << "\n";
    }
  }
}

}  // namespace edgetilt
