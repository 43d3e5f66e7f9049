#include "d2dsim/log.hpp"

#include <cstdlib>
#include <iostream>

namespace d2dsim {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("D2DSIM_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string value(env);
    if (value == "error") return LogLevel::Error;
    if (value == "warn") return LogLevel::Warn;
    if (value == "info") return LogLevel::Info;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[d2dsim:" << names[static_cast<int>(level)] << "] " << message
            << '\n';
}

}  // namespace d2dsim
