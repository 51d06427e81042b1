#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "raman/grid.hpp"

namespace raman {

// Malformed configuration; `line` is 0 when the problem is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& key, int line, const std::string& what);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

struct GridBlock {
  double length = 75.0;  // mm
  int nz = 200;
  int nt = 200;
  double margin = 3.0;
};

struct ReadoutBlock {
  PumpConfig pump;         // g0 here is g0'
  double delta_k = 0.0;    // 1/mm
  int target_mode = 1;
};

struct SweepBlock {
  std::string parameter;  // readout.g0_prime or stokes.g0
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
};

struct StatsBlock {
  long n_max = 0;          // 0: automatic support
  long resolution = 2000;  // maximum pmf samples written
  std::string path = "auto";
};

struct CalibrateBlock {
  double target = 1e6;
  double tolerance = 1e-3;  // relative
};

struct OutputBlock {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};
  int mode_functions = 4;  // mode functions written per family

  bool wants(const std::string& format) const;
};

struct RunConfig {
  GridBlock grid;
  PumpConfig stokes;
  ReadoutBlock readout;
  SweepBlock sweep;
  StatsBlock stats;
  CalibrateBlock calibrate;
  OutputBlock output;
  // Keys given explicitly, with their line numbers.
  std::map<std::string, int> given;

  bool has(const std::string& key) const { return given.count(key) != 0; }
};

// Flat `section.key = value` lines; `#` starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Keys that must be present for a subcommand; throws ParseError naming the
// first missing one.
void require_keys(const RunConfig& cfg, const std::string& subcommand);

// Every key with its effective value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

const std::vector<std::string>& subcommands();

}  // namespace raman
