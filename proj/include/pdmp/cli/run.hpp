#pragma once

#include "pdmp/cli/config.hpp"

namespace pdmp::cli {

/// Execute a parsed configuration. Returns the process exit code:
/// 0 success, 2 runtime/model error, 3 statistical validation failure.
int run(const RunConfig& cfg);

/// Parse + run; the CLI entry point.
int main(int argc, const char* const* argv);

} // namespace pdmp::cli
