#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace guigan {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Verbosity from GUIGAN_LOG (error|info|debug), default info.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("GUIGAN_LOG");
    if (!env) return LogLevel::kInfo;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kInfo;
  }();
  return level;
}

template <typename... Args>
void log_at(LogLevel lvl, const char* tag, const char* fmt, Args... args) {
  if (lvl > log_level()) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

#define GUIGAN_LOG_ERROR(...) ::guigan::log_at(::guigan::LogLevel::kError, "error", __VA_ARGS__)
#define GUIGAN_LOG_INFO(...) ::guigan::log_at(::guigan::LogLevel::kInfo, "info", __VA_ARGS__)
#define GUIGAN_LOG_DEBUG(...) ::guigan::log_at(::guigan::LogLevel::kDebug, "debug", __VA_ARGS__)

}  // namespace guigan
