#pragma once

#include <string_view>

namespace coreset::log {

// Warnings go to stderr by default; tests can silence them.
void warn(std::string_view message);
void set_quiet(bool quiet);

} // namespace coreset::log
