#pragma once

#include <string>

namespace egosum {

/// Warnings go to stderr unless silenced (tests silence them).
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace egosum
