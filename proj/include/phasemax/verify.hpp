#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "phasemax/numerics.hpp"

namespace phasemax::verify {

enum class Suite { ClosedForms, Geometry, Vc, All };

Suite parse_suite(std::string_view name);

struct Check {
  std::string name;
  bool passed = false;
  /// Observed quantity and the bound it is compared against, for the report.
  double observed = 0.0;
  double required = 0.0;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  [[nodiscard]] bool all_passed() const;
};

struct MonteCarloEstimate {
  double probability = 0.0;
  long draws = 0;
};

/// Fraction of draws with alpha v + beta / v > g, v ~ Rayleigh(1), g ~ Normal(0, 1).
MonteCarloEstimate monte_carlo_rayleigh_normal(double alpha, double beta, long draws,
                                               RngStream& rng);

/// Runs the selected checks; failures are recorded, never thrown.
Report run_verify(Suite suite, std::uint64_t seed);

void print_report(std::ostream& out, const Report& report);

}  // namespace phasemax::verify
