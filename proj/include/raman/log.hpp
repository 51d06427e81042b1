#pragma once

#include <string_view>
#include <utility>

#include <fmt/format.h>

namespace raman {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Initialized from RAMAN_MODES_LOG (error, info, debug); default info.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_write(LogLevel level, std::string_view message);

template <typename... Args>
void log_error(fmt::format_string<Args...> f, Args&&... args) {
  log_write(LogLevel::error, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void log_info(fmt::format_string<Args...> f, Args&&... args) {
  if (log_level() >= LogLevel::info) log_write(LogLevel::info, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void log_debug(fmt::format_string<Args...> f, Args&&... args) {
  if (log_level() >= LogLevel::debug)
    log_write(LogLevel::debug, fmt::format(f, std::forward<Args>(args)...));
}

}  // namespace raman
