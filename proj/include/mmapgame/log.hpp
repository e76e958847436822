#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace mmapgame {

// Verbosity from the MMAP_LOG environment variable: off (default), error,
// info, debug.
enum class LogLevel { Off = 0, Error = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* raw = std::getenv("MMAP_LOG");
    if (!raw) return LogLevel::Off;
    const std::string v(raw);
    if (v == "error") return LogLevel::Error;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Off;
  }();
  return level;
}

inline void log_line(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) <= static_cast<int>(log_level()))
    std::cerr << "[mmapgame] " << message << '\n';
}

#define MMAP_LOG_INFO(msg) ::mmapgame::log_line(::mmapgame::LogLevel::Info, (msg))
#define MMAP_LOG_DEBUG(msg) \
  ::mmapgame::log_line(::mmapgame::LogLevel::Debug, (msg))
#define MMAP_LOG_ERROR(msg) \
  ::mmapgame::log_line(::mmapgame::LogLevel::Error, (msg))

}  // namespace mmapgame
