#include "raman/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace raman {

ParseError::ParseError(const std::string& key, int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, key, what)
                                  : fmt::format("{}: {}", key, what)),
      key_(key),
      line_(line) {}

bool OutputBlock::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

struct Field {
  const char* name;
  std::function<void(RunConfig&, const std::string&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

double parse_double(const std::string& key, const std::string& v, int line) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ParseError(key, line, fmt::format("'{}' is not a number", v));
  return x;
}

long parse_long(const std::string& key, const std::string& v, int line) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError(key, line, fmt::format("'{}' is not an integer", v));
  return x;
}

template <typename Get>
Field real_field(const char* name, Get get, std::function<bool(double)> ok, const char* rule) {
  return {name,
          [=](RunConfig& c, const std::string& v, int line) {
            const double x = parse_double(name, v, line);
            if (!ok(x)) throw ParseError(name, line, fmt::format("{} must be {}", v, rule));
            get(c) = x;
          },
          [=](const RunConfig& c) { return num(get(c)); }};
}

template <typename Get>
Field int_field(const char* name, Get get, long min, const char* rule) {
  return {name,
          [=](RunConfig& c, const std::string& v, int line) {
            const long x = parse_long(name, v, line);
            if (x < min || x > 2'000'000'000L)
              throw ParseError(name, line, fmt::format("{} must be {}", v, rule));
            get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(x);
          },
          [=](const RunConfig& c) { return std::to_string(get(c)); }};
}

template <typename Get>
Field shape_field(const char* name, Get get) {
  return {name,
          [=](RunConfig& c, const std::string& v, int line) {
            try {
              get(c) = pump_shape_from_string(v);
            } catch (const std::invalid_argument&) {
              throw ParseError(name, line, fmt::format("'{}' is not gaussian or square", v));
            }
          },
          [=](const RunConfig& c) { return std::string(to_string(get(c))); }};
}

const auto any = [](double) { return true; };
const auto gt0 = [](double x) { return x > 0.0; };
const auto ge0 = [](double x) { return x >= 0.0; };

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      real_field("grid.L", [](auto& c) -> auto& { return c.grid.length; }, gt0, "> 0"),
      int_field("grid.nz", [](auto& c) -> auto& { return c.grid.nz; }, 2, ">= 2"),
      int_field("grid.nt", [](auto& c) -> auto& { return c.grid.nt; }, 2, ">= 2"),
      real_field("grid.margin", [](auto& c) -> auto& { return c.grid.margin; },
                 [](double x) { return x >= 2.0; }, ">= 2"),
      real_field("stokes.g0", [](auto& c) -> auto& { return c.stokes.g0; }, ge0, ">= 0"),
      real_field("stokes.tau_p", [](auto& c) -> auto& { return c.stokes.tau_p; }, gt0, "> 0"),
      real_field("stokes.delta_beta", [](auto& c) -> auto& { return c.stokes.delta_beta; }, any,
                 "finite"),
      shape_field("stokes.shape", [](auto& c) -> auto& { return c.stokes.shape; }),
      real_field("readout.g0_prime", [](auto& c) -> auto& { return c.readout.pump.g0; }, ge0,
                 ">= 0"),
      real_field("readout.tau_p_prime", [](auto& c) -> auto& { return c.readout.pump.tau_p; },
                 gt0, "> 0"),
      real_field("readout.delta_beta_prime",
                 [](auto& c) -> auto& { return c.readout.pump.delta_beta; }, any, "finite"),
      shape_field("readout.shape", [](auto& c) -> auto& { return c.readout.pump.shape; }),
      real_field("readout.delta_k", [](auto& c) -> auto& { return c.readout.delta_k; }, any,
                 "finite"),
      int_field("readout.target_mode", [](auto& c) -> auto& { return c.readout.target_mode; }, 1,
                ">= 1"),
      {"sweep.parameter",
       [](RunConfig& c, const std::string& v, int line) {
         if (v != "readout.g0_prime" && v != "stokes.g0")
           throw ParseError("sweep.parameter", line,
                            fmt::format("'{}' is not readout.g0_prime or stokes.g0", v));
         c.sweep.parameter = v;
       },
       [](const RunConfig& c) { return c.sweep.parameter; }},
      real_field("sweep.start", [](auto& c) -> auto& { return c.sweep.start; }, ge0, ">= 0"),
      real_field("sweep.stop", [](auto& c) -> auto& { return c.sweep.stop; }, ge0, ">= 0"),
      int_field("sweep.count", [](auto& c) -> auto& { return c.sweep.count; }, 2, ">= 2"),
      int_field("stats.n_max", [](auto& c) -> auto& { return c.stats.n_max; }, 0, ">= 0"),
      int_field("stats.resolution", [](auto& c) -> auto& { return c.stats.resolution; }, 1,
                ">= 1"),
      {"stats.path",
       [](RunConfig& c, const std::string& v, int line) {
         if (v != "auto" && v != "exact" && v != "transform")
           throw ParseError("stats.path", line, fmt::format("'{}' is not auto, exact or transform", v));
         c.stats.path = v;
       },
       [](const RunConfig& c) { return c.stats.path; }},
      real_field("calibrate.target", [](auto& c) -> auto& { return c.calibrate.target; }, gt0,
                 "> 0"),
      real_field("calibrate.tolerance", [](auto& c) -> auto& { return c.calibrate.tolerance; },
                 [](double x) { return x > 0.0 && x < 0.5; }, "in (0, 0.5)"),
      {"output.directory",
       [](RunConfig& c, const std::string& v, int line) {
         if (v.empty()) throw ParseError("output.directory", line, "must not be empty");
         c.output.directory = v;
       },
       [](const RunConfig& c) { return c.output.directory; }},
      {"output.formats",
       [](RunConfig& c, const std::string& v, int line) {
         std::vector<std::string> out;
         std::stringstream ss(v);
         for (std::string item; std::getline(ss, item, ',');) {
           item = trim(item);
           if (item != "csv" && item != "json")
             throw ParseError("output.formats", line, fmt::format("unknown format '{}'", item));
           if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
         }
         c.output.formats = out;
       },
       [](const RunConfig& c) { return fmt::format("{}", fmt::join(c.output.formats, ",")); }},
      int_field("output.mode_functions", [](auto& c) -> auto& { return c.output.mode_functions; },
                0, ">= 0"),
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(body, line, "expected 'section.key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.name; });
    if (it == table.end()) throw ParseError(key, line, "unknown key");
    if (cfg.has(key)) throw ParseError(key, line, fmt::format("already set on line {}", cfg.given[key]));
    if (value.empty()) throw ParseError(key, line, "missing value");
    it->set(cfg, value, line);
    cfg.given[key] = line;
  }
  if (cfg.has("sweep.stop") && !(cfg.sweep.stop > cfg.sweep.start))
    throw ParseError("sweep.stop", cfg.given["sweep.stop"], "must exceed sweep.start");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path.string(), 0, "cannot open configuration file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"stokes", "readout", "chain",
                                                 "stats",  "sweep",   "calibrate"};
  return names;
}

void require_keys(const RunConfig& cfg, const std::string& subcommand) {
  std::vector<std::string> keys;
  if (subcommand == "stokes" || subcommand == "stats") {
    keys = {"stokes.g0"};
  } else if (subcommand == "readout") {
    keys = {"readout.g0_prime"};
  } else if (subcommand == "chain") {
    keys = {"stokes.g0", "readout.g0_prime"};
  } else if (subcommand == "sweep") {
    keys = {"sweep.parameter", "sweep.start", "sweep.stop", "sweep.count"};
    if (cfg.sweep.parameter == "readout.g0_prime") keys.push_back("stokes.g0");
  } else if (subcommand == "calibrate") {
  } else {
    throw ParseError(subcommand, 0, "unknown subcommand");
  }
  for (const auto& k : keys)
    if (!cfg.has(k)) throw ParseError(k, 0, fmt::format("required by '{}' but not set", subcommand));
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  // Without a sweep parameter the sweep block has no meaningful values; leaving
  // it out keeps the list re-parseable.
  const bool sweep = !cfg.sweep.parameter.empty();
  for (const auto& f : fields()) {
    if (!sweep && std::string_view(f.name).starts_with("sweep.")) continue;
    out.emplace_back(f.name, f.get(cfg));
  }
  return out;
}

}  // namespace raman
