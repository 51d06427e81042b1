#include "raman/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace raman {

namespace {

LogLevel from_env() {
  const char* v = std::getenv("RAMAN_MODES_LOG");
  if (v == nullptr) return LogLevel::info;
  const std::string s(v);
  if (s == "error") return LogLevel::error;
  if (s == "debug") return LogLevel::debug;
  return LogLevel::info;
}

std::atomic<int>& level_slot() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_slot().load(std::memory_order_relaxed)); }

void set_log_level(LogLevel level) { level_slot().store(static_cast<int>(level)); }

void log_write(LogLevel level, std::string_view message) {
  static constexpr const char* tags[] = {"error", "info", "debug"};
  std::lock_guard lock(sink_mutex());
  fmt::print(stderr, "[raman-modes {}] {}\n", tags[static_cast<int>(level)], message);
}

}  // namespace raman
