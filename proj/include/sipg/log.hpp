#pragma once

#include <string>

namespace sipg::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold read once from SIPG_LOG (error, warn, info, debug); warn by default.
Level threshold();
void setThreshold(Level level);

void write(Level level, const std::string& message);
inline void error(const std::string& m) { write(Level::Error, m); }
inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace sipg::log
