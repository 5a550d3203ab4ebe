#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgetilt/asymptopia.hpp"
#include "edgetilt/cf.hpp"
#include "edgetilt/exact_dist.hpp"

namespace edgetilt {

/// Fixed-point text of x cut (not rounded) to `decimals` places.
std::string truncated(double x, int decimals);

nlohmann::json to_json(const ClassReport& rep, const std::string& die);
nlohmann::json to_json(const DieReport& rep);
/// Inverse of to_json; throws Error(kParse) on schema violations.
DieReport die_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CfProfile& profile);
nlohmann::json to_json(const TailEnvelope& env);
nlohmann::json to_json(const LatticeStructure& ls);

/// n,tilt_numerator,tilt_denominator,tilt_float,normalized
void write_tilt_csv(std::ostream& os, const std::vector<TiltValue>& series);

/// n,total,principal,tail,rest (all scaled by sqrt(2 pi n))
void write_bounds_csv(std::ostream& os, const std::vector<ScaledBoundRow>& rows);

/// t,abs_f for `count` + 1 equally spaced points of |f| on [0, pi] for the
/// span-normalized die.
void write_cf_samples_csv(std::ostream& os, const Die& d, int count);

/// Human-readable per-class table.
void write_report_table(std::ostream& os, const DieReport& rep);

}  // namespace edgetilt
