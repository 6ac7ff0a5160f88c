#pragma once

namespace flexics {

// Entry point for the command-line frontend. Exit codes: 0 success,
// 1 configuration or input error, 2 unsatisfiable task, 3 soundness
// violation detected in produced or consumed results.
int run_cli(int argc, const char* const* argv);

}  // namespace flexics
