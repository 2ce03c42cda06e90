#pragma once

#include <string>
#include <vector>

namespace orbitcarve::cli {

// Parses and runs one command. Returns 0 on success, 1 on runtime failure and
// 2 on usage errors; messages go to stdout/stderr.
int run(const std::vector<std::string>& args);

}  // namespace orbitcarve::cli
