#pragma once

#include <functional>
#include <string_view>

namespace ittail {

enum class LogLevel { Debug = 0, Warning = 1, Error = 2, Off = 3 };

/// Messages below the threshold are dropped. Defaults to Error so that
/// library warnings (e.g. coefficient pruning) stay quiet in sweeps.
void set_log_level(LogLevel level);
LogLevel log_level();

/// Replace the sink (stderr by default). Pass an empty function to restore.
void set_log_sink(std::function<void(LogLevel, std::string_view)> sink);

void log(LogLevel level, std::string_view message);

}  // namespace ittail
