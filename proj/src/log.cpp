#include "egosum/log.hpp"

#include <atomic>
#include <iostream>

namespace egosum {

namespace {
std::atomic<bool> g_enabled{true};
}

void warn(const std::string& message) {
  if (g_enabled.load()) std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_enabled.store(enabled); }

}  // namespace egosum
