#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace n2rpp::cli {

// Parses argv, runs one subcommand and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

inline constexpr double kGradcheckTolerance = 1e-4;

struct GradcheckResult {
  std::string name;
  double max_rel_error = 0.0;
  bool passed() const { return max_rel_error < kGradcheckTolerance; }
};

// Finite-difference checks of every layer kind and of reduced-width ae, gen,
// disc and clf networks, each over `seeds` seeds starting at `first_seed`.
std::vector<GradcheckResult> run_gradchecks(std::size_t seeds, std::uint64_t first_seed = 0);

}  // namespace n2rpp::cli
