#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sar/random.hpp"

namespace sar::verify {

struct Check
{
  std::string suite;
  std::string name;
  /// Worst residual seen by the check (0 for exact checks that passed).
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// graph, dynamics, control, oracle, all.
std::vector<std::string> suite_names();

/// Throws InvalidArgument for an unknown suite.
std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed = random::kDefaultSeed);

} // namespace sar::verify
