#pragma once

namespace stochint::cli {

// Parse argv, run the requested subcommand, and write its artifact. Returns
// the process exit code: 0 on success, 1 on configuration errors, 2 on
// numerical failures (quadrature refinement cap, discretization bias flag).
int run(int argc, const char* const* argv);

}  // namespace stochint::cli
