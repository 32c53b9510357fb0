#pragma once

#include <string>

namespace peakcast::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

void set_level(Level level);
Level level();

void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

// Warnings emitted since the last reset; used by tests that assert a warning fired.
long warn_count();
void reset_warn_count();

}  // namespace peakcast::log
