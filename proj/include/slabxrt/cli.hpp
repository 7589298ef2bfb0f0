#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace slabxrt {

enum class Subcommand { forward, decompose, verify, mobius_demo, constants };

struct RunConfig {
  Subcommand subcommand = Subcommand::verify;
  std::string field_path;
  std::string covering_path;  // optional
  std::vector<double> b;
  int a_grid = 16;
  int quad_nodes = 0;  // 0 picks a node count from the field's band limits
  std::string method = "fourier";
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string out_path;  // empty writes to stdout
  // mobius-demo
  int m = 0;
  int band = 2;
  // constants: inclusive ranges
  int n_lo = 1, n_hi = 1;
  int m_lo = 1, m_hi = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 1;
inline constexpr int kExitPrecondition = 2;

/// Executes one subcommand. Kernel membership is reported in the payload; the
/// exit code only distinguishes parse errors (1) and precondition
/// violations (2) from success (0).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace slabxrt
