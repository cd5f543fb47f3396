#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hrtlab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 bad arguments, 3 a module rejected the input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hrtlab::cli
