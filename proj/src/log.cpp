#include "sipg/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace sipg::log {

namespace {

Level fromEnvironment() {
  const char* v = std::getenv("SIPG_LOG");
  if (v == nullptr) return Level::Warn;
  const std::string_view s(v);
  if (s == "error") return Level::Error;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return Level::Warn;
}

std::atomic<int>& current() {
  static std::atomic<int> level{static_cast<int>(fromEnvironment())};
  return level;
}

const char* label(Level level) {
  switch (level) {
    case Level::Error: return "error";
    case Level::Warn: return "warn";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(current().load()); }
void setThreshold(Level level) { current().store(static_cast<int>(level)); }

void write(Level level, const std::string& message) {
  if (static_cast<int>(level) > current().load()) return;
  static std::mutex m;
  std::lock_guard lock(m);
  std::cerr << "[sipg " << label(level) << "] " << message << '\n';
}

}  // namespace sipg::log
