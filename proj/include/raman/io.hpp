#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "raman/decomposition.hpp"

namespace raman {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

// Round-trip numeric text (17 significant digits).
std::string format_number(double x);

// RFC 4180 table: header row, CRLF line ends, fields quoted only when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Columns: coordinate, real, imag.
std::string function_csv(const std::string& coordinate, const Eigen::VectorXd& x,
                         const Eigen::VectorXcd& f);

// Columns: index, zeta, occupancy.
std::string squeezer_catalog_csv(const std::vector<ModePair>& modes);
// Columns: index, eta, one_minus_eta.
std::string readout_catalog_csv(const std::vector<ReadoutModePair>& modes);

json grid_json(const SimulationGrid& grid);
json pump_json(const PumpConfig& pump, double length);
json residuals_json(const ResidualReport& report);

// Pretty-printed with a trailing newline.
std::string json_text(const json& j);

// Creates parent directories; throws std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace raman
