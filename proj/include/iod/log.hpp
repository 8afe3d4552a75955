#pragma once

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

namespace iod {

// Diagnostic logging to stderr, controlled by the IOD_SIM_LOG environment
// variable (silent|error|warn|info|debug). Never feeds the trace.
enum class LogLevel { Silent = 0, Error = 1, Warn = 2, Info = 3, Debug = 4 };

inline LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* env = std::getenv("IOD_SIM_LOG");
    if (!env) return LogLevel::Warn;
    std::string v(env);
    if (v == "silent" || v == "off") return LogLevel::Silent;
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return lvl;
}

inline void log(LogLevel lvl, const std::string& msg) {
  static const char* names[] = {"", "error", "warn", "info", "debug"};
  if (static_cast<int>(lvl) <= static_cast<int>(log_level()) && lvl != LogLevel::Silent)
    std::cerr << "[iod:" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

#define IOD_LOG_DEBUG(expr)                                   \
  do {                                                        \
    if (::iod::log_level() >= ::iod::LogLevel::Debug) {       \
      std::ostringstream oss_;                                \
      oss_ << expr;                                           \
      ::iod::log(::iod::LogLevel::Debug, oss_.str());         \
    }                                                         \
  } while (0)

#define IOD_LOG_INFO(expr)                                    \
  do {                                                        \
    if (::iod::log_level() >= ::iod::LogLevel::Info) {        \
      std::ostringstream oss_;                                \
      oss_ << expr;                                           \
      ::iod::log(::iod::LogLevel::Info, oss_.str());          \
    }                                                         \
  } while (0)

#define IOD_LOG_WARN(expr)                                    \
  do {                                                        \
    if (::iod::log_level() >= ::iod::LogLevel::Warn) {        \
      std::ostringstream oss_;                                \
      oss_ << expr;                                           \
      ::iod::log(::iod::LogLevel::Warn, oss_.str());          \
    }                                                         \
  } while (0)

}  // namespace iod
