#include "flexics/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace flexics {

static LogLevel parse_log_level() {
  const char* env = std::getenv("FLEXICS_LOG");
  if (env == nullptr) return LogLevel::warn;
  if (std::strcmp(env, "none") == 0) return LogLevel::none;
  if (std::strcmp(env, "error") == 0) return LogLevel::error;
  if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
  if (std::strcmp(env, "info") == 0) return LogLevel::info;
  if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
  return LogLevel::warn;
}

LogLevel log_level() {
  static const LogLevel level = parse_log_level();
  return level;
}

void log_line(LogLevel level, std::string_view msg) {
  if (int(level) > int(log_level())) return;
  const char* tag = "";
  switch (level) {
    case LogLevel::error: tag = "error"; break;
    case LogLevel::warn: tag = "warn"; break;
    case LogLevel::info: tag = "info"; break;
    case LogLevel::debug: tag = "debug"; break;
    case LogLevel::none: return;
  }
  std::fprintf(stderr, "[%s] %.*s\n", tag, int(msg.size()), msg.data());
}

}  // namespace flexics
