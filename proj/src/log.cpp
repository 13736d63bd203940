#include "ittail/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace ittail {
namespace {

std::atomic<LogLevel> g_level{LogLevel::Error};
std::mutex g_mutex;
std::function<void(LogLevel, std::string_view)> g_sink;

const char* label(LogLevel level) {
  switch (level) {
    case LogLevel::Debug: return "debug";
    case LogLevel::Warning: return "warning";
    case LogLevel::Error: return "error";
    default: return "";
  }
}

}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void set_log_sink(std::function<void(LogLevel, std::string_view)> sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void log(LogLevel level, std::string_view message) {
  if (level == LogLevel::Off || level < g_level.load()) return;
  std::lock_guard lock(g_mutex);
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::cerr << "ittail " << label(level) << ": " << message << '\n';
}

}  // namespace ittail
