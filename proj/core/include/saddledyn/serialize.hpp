#pragma once

#include <string>

#include "saddledyn/analysis.hpp"
#include "saddledyn/flows.hpp"
#include "saddledyn/reduced.hpp"
#include "saddledyn/singularity.hpp"

namespace sdyn {

/// Model specs serialize to {"variant": ..., "params": {...}} with canonical
/// (lexicographic) key ordering; serialize(parse(s)) is byte-stable.
std::string to_json_string(const ModelSpec& spec, int indent = -1);
ModelSpec model_spec_from_json(const std::string& json_text);

/// CSV with columns t, x_1..x_N, v_1..v_N, grad_norm, lambda1, lambda2, gap,
/// v_err; '.' decimal separator, 17 significant digits.
std::string to_csv(const Trajectory& traj);
std::string to_json_string(const Trajectory& traj, int indent = -1);

std::string to_json_string(const SingularityReport& rep, int indent = -1);
std::string to_json_string(const FixedPointReport& rep, int indent = -1);
std::string to_json_string(const RegionCertificate& cert, int indent = -1);
std::string to_json_string(const CycleMeasurement& m, int indent = -1);
std::string to_json_string(const BenchmarkReport& rep, int indent = -1);

/// Basin map as CSV rows x_1..x_N, label_code plus a JSON legend mapping
/// codes to stop tags.
std::string to_csv(const BasinMap& map);
std::string basin_legend_json(int indent = -1);

/// printf("%.17g") formatting used by every CSV writer.
std::string format_g17(double v);

}  // namespace sdyn
