#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace tsched {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

// Verbosity from TENANTSCHED_LOG: quiet, info (default), or debug.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("TENANTSCHED_LOG");
    if (env == nullptr) return LogLevel::kInfo;
    const std::string v(env);
    if (v == "quiet") return LogLevel::kQuiet;
    if (v == "debug") return LogLevel::kDebug;
    return LogLevel::kInfo;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) std::cout << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) std::cerr << "[debug] " << msg << "\n";
}

}  // namespace tsched
