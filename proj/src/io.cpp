#include "raman/io.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace raman {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw std::invalid_argument(
        fmt::format("CSV row has {} fields, header has {}", row.size(), header_.size()));
  rows_.push_back(std::move(row));
}

namespace {

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += quoted(row[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_row(out, header_);
  for (const auto& r : rows_) append_row(out, r);
  return out;
}

std::string function_csv(const std::string& coordinate, const Eigen::VectorXd& x,
                         const Eigen::VectorXcd& f) {
  if (x.size() != f.size()) throw std::invalid_argument("function_csv: size mismatch");
  CsvTable t({coordinate, "real", "imag"});
  for (Eigen::Index i = 0; i < x.size(); ++i)
    t.add_row({format_number(x(i)), format_number(f(i).real()), format_number(f(i).imag())});
  return t.str();
}

std::string squeezer_catalog_csv(const std::vector<ModePair>& modes) {
  CsvTable t({"index", "zeta", "occupancy"});
  for (const auto& m : modes)
    t.add_row({std::to_string(m.index), format_number(m.zeta), format_number(m.occupancy())});
  return t.str();
}

std::string readout_catalog_csv(const std::vector<ReadoutModePair>& modes) {
  CsvTable t({"index", "eta", "one_minus_eta"});
  for (const auto& m : modes) {
    const double c = std::cos(m.theta);
    t.add_row({std::to_string(m.index), format_number(m.eta), format_number(c * c)});
  }
  return t.str();
}

json grid_json(const SimulationGrid& grid) {
  json j;
  j["L"] = grid.length();
  j["T"] = grid.half_window();
  j["nz"] = grid.nz();
  j["nt"] = grid.nt();
  j["dz"] = grid.dz();
  j["dt"] = grid.dt();
  return j;
}

json pump_json(const PumpConfig& pump, double length) {
  const DimensionlessParams d = dimensionless(pump, length);
  json j;
  j["g0"] = pump.g0;
  j["tau_p"] = pump.tau_p;
  j["delta_beta"] = pump.delta_beta;
  j["shape"] = to_string(pump.shape);
  j["Gamma"] = d.gamma;
  j["Delta"] = d.delta;
  return j;
}

json residuals_json(const ResidualReport& report) {
  json j = json::object();
  for (const auto& [name, value] : report.entries) j[name] = value;
  return j;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

}  // namespace raman
