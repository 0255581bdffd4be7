#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcland/climb.hpp"
#include "qcland/control_field.hpp"
#include "qcland/level_set.hpp"
#include "qcland/model_zoo.hpp"
#include "qcland/objective.hpp"
#include "qcland/quantum_system.hpp"
#include "qcland/string_method.hpp"

namespace qcland {

using json = nlohmann::json;

// Complex matrices/vectors encode as {"rows", "cols", "data"} with data a
// row-major array of [re, im] pairs.
json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const json& j);
json complex_vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd complex_vector_from_json(const json& j);

json to_json(const ControlField& field);
ControlField control_field_from_json(const json& j);

json to_json(const QuantumSystem& system);
QuantumSystem quantum_system_from_json(const json& j);

json to_json(const Objective& objective);
Objective objective_from_json(const json& j);

json to_json(const Preset& preset);

/// One CSV row per control channel, L comma-separated samples, round-trip
/// exact for doubles.
void save_field_csv(const std::filesystem::path& path, const ControlField& field);
ControlField load_field_csv(const std::filesystem::path& path, double duration);

/// Report payloads (J histories downsampled to at most max_history points).
json climb_report_to_json(const ClimbReport& report, std::size_t max_history = 1000);
json connect_report_to_json(const ConnectReport& report, std::size_t max_history = 2000);
json string_state_to_json(const StringState& state);

void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

}  // namespace qcland
