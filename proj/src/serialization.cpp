#include "qcland/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qcland/analysis.hpp"

namespace qcland {

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("complex matrix: data size mismatch");
  }
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++i) {
      m(r, c) = std::complex<double>(data[i][0].get<double>(), data[i][1].get<double>());
    }
  }
  return m;
}

json complex_vector_to_json(const Eigen::VectorXcd& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back({v(i).real(), v(i).imag()});
  return json{{"size", v.size()}, {"data", std::move(data)}};
}

Eigen::VectorXcd complex_vector_from_json(const json& j) {
  const auto size = j.at("size").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != size) {
    throw std::invalid_argument("complex vector: data size mismatch");
  }
  Eigen::VectorXcd v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    v(i) = std::complex<double>(data[i][0].get<double>(), data[i][1].get<double>());
  }
  return v;
}

json to_json(const ControlField& field) {
  json rows = json::array();
  for (int c = 0; c < field.n_controls(); ++c) {
    json row = json::array();
    for (int k = 0; k < field.length(); ++k) row.push_back(field.samples()(c, k));
    rows.push_back(std::move(row));
  }
  return json{{"duration", field.duration()}, {"samples", std::move(rows)}};
}

ControlField control_field_from_json(const json& j) {
  const auto& rows = j.at("samples");
  const auto n_controls = static_cast<Eigen::Index>(rows.size());
  if (n_controls < 1) throw std::invalid_argument("control field: empty samples");
  const auto length = static_cast<Eigen::Index>(rows[0].size());
  Eigen::ArrayXXd samples(n_controls, length);
  for (Eigen::Index c = 0; c < n_controls; ++c) {
    if (static_cast<Eigen::Index>(rows[c].size()) != length) {
      throw std::invalid_argument("control field: ragged sample rows");
    }
    for (Eigen::Index k = 0; k < length; ++k) samples(c, k) = rows[c][k].get<double>();
  }
  return ControlField(std::move(samples), j.at("duration").get<double>());
}

json to_json(const QuantumSystem& system) {
  json dipoles = json::array();
  for (const auto& mu : system.dipoles()) dipoles.push_back(complex_matrix_to_json(mu));
  return json{{"h0", complex_matrix_to_json(system.h0())}, {"dipoles", std::move(dipoles)}};
}

QuantumSystem quantum_system_from_json(const json& j) {
  std::vector<Eigen::MatrixXcd> dipoles;
  for (const auto& d : j.at("dipoles")) dipoles.push_back(complex_matrix_from_json(d));
  return QuantumSystem(complex_matrix_from_json(j.at("h0")), std::move(dipoles));
}

json to_json(const Objective& objective) {
  switch (objective.kind()) {
    case Objective::Kind::StateTransfer:
      return json{{"type", "stl"},
                  {"initial", complex_vector_to_json(objective.initial_state())},
                  {"final", complex_vector_to_json(objective.final_state())}};
    case Objective::Kind::Observable:
      return json{{"type", "ocl"},
                  {"rho0", complex_matrix_to_json(objective.rho0())},
                  {"theta", complex_matrix_to_json(objective.theta())}};
    case Objective::Kind::UnitaryGate:
      return json{{"type", "utl"}, {"target", complex_matrix_to_json(objective.target())}};
  }
  throw std::logic_error("unreachable");
}

Objective objective_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "stl") {
    return Objective::state_transfer(complex_vector_from_json(j.at("initial")),
                                     complex_vector_from_json(j.at("final")));
  }
  if (type == "ocl") {
    return Objective::observable(complex_matrix_from_json(j.at("rho0")),
                                 complex_matrix_from_json(j.at("theta")));
  }
  if (type == "utl") {
    return Objective::unitary_gate(complex_matrix_from_json(j.at("target")));
  }
  throw std::invalid_argument("unknown objective type: " + type);
}

json to_json(const Preset& preset) {
  return json{{"name", preset.name},
              {"system", to_json(preset.system)},
              {"objectives",
               {{"stl", to_json(preset.stl)},
                {"ocl", to_json(preset.ocl)},
                {"utl", to_json(preset.utl)}}},
              {"duration", preset.duration},
              {"grid_points", preset.grid_points},
              {"field_spec",
               {{"n_components", preset.field_spec.n_components},
                {"freq_lo", preset.field_spec.freq_lo},
                {"freq_hi", preset.field_spec.freq_hi},
                {"target_fluence", preset.field_spec.target_fluence}}}};
}

void save_field_csv(const std::filesystem::path& path, const ControlField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.precision(17);
  for (int c = 0; c < field.n_controls(); ++c) {
    for (int k = 0; k < field.length(); ++k) {
      if (k) out << ',';
      out << field.samples()(c, k);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ControlField load_field_csv(const std::filesystem::path& path, double duration) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty field csv: " + path.string());
  Eigen::ArrayXXd samples(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c].size() != rows[0].size()) {
      throw std::runtime_error("ragged field csv: " + path.string());
    }
    for (std::size_t k = 0; k < rows[c].size(); ++k) {
      samples(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = rows[c][k];
    }
  }
  return ControlField(std::move(samples), duration);
}

namespace {

template <typename T>
std::vector<T> downsample(const std::vector<T>& in, std::size_t max_points) {
  if (in.size() <= max_points || max_points < 2) return in;
  std::vector<T> out;
  out.reserve(max_points);
  for (std::size_t i = 0; i < max_points; ++i) {
    const std::size_t idx = i * (in.size() - 1) / (max_points - 1);
    out.push_back(in[idx]);
  }
  return out;
}

}  // namespace

json climb_report_to_json(const ClimbReport& report, std::size_t max_history) {
  json history = json::array();
  for (const auto& [s, j] : downsample(report.j_history, max_history)) {
    history.push_back({s, j});
  }
  return json{{"converged", report.converged},
              {"s_reached", report.s_reached},
              {"gradient_evals", report.gradient_evals},
              {"steps", report.steps},
              {"final_j", report.final_j()},
              {"final_fluence", fluence(report.field)},
              {"j_history", std::move(history)}};
}

json connect_report_to_json(const ConnectReport& report, std::size_t max_history) {
  json history = json::array();
  for (const auto& rec : downsample(report.history, max_history)) {
    history.push_back({{"s", rec.s},
                       {"metric", rec.metric},
                       {"j", rec.j},
                       {"post_recovery", rec.post_recovery}});
  }
  json windows = json::array();
  for (const auto& w : report.windows) {
    windows.push_back({{"index", w.index},
                       {"path_length", w.path_length},
                       {"ratio", w.ratio},
                       {"trapped", w.trapped}});
  }
  return json{{"outcome", to_string(report.outcome)},
              {"near_target", report.near_target},
              {"path_length", report.path_length},
              {"endpoint_distance", report.endpoint_distance},
              {"ratio", report.ratio},
              {"recoveries", report.recoveries},
              {"propagations", report.propagations},
              {"s_end", report.s_end},
              {"j_min_recorded", report.j_min_recorded},
              {"final_fluence", report.final_fluence},
              {"history", std::move(history)},
              {"windows", std::move(windows)}};
}

json string_state_to_json(const StringState& state) {
  json j_values = json::array();
  for (const double j : state.j_values) j_values.push_back(j);
  json out{{"status", to_string(state.status)},
           {"iterations", state.iterations},
           {"n_segments", state.n_segments()},
           {"j_values", std::move(j_values)}};
  if (!state.failure_reason.empty()) out["failure_reason"] = state.failure_reason;
  if (state.images.size() >= 2) {
    const PathMetrics metrics = ratio_R(state.images);
    out["ratio"] = metrics.ratio;
    out["path_length"] = metrics.path_length;
    out["endpoint_distance"] = metrics.endpoint_distance;
  }
  return out;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  json j;
  in >> j;
  return j;
}

}  // namespace qcland
