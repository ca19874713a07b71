#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdp::cli {

/// Exit codes: 0 success, 1 a checked bound or schedule failed, 2 bad usage
/// or unreadable input.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdp::cli
