#pragma once

#include <iostream>
#include <string_view>

namespace qmit
{

// Diagnostics go to stderr so that stdout and artifact files stay deterministic.
inline void log_warning(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }
inline void log_info(std::string_view msg) { std::cerr << msg << '\n'; }

} // namespace qmit
