#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnls/config.hpp"
#include "rnls/experiments.hpp"

namespace rnls {

inline constexpr int criterion_count = 12;

// Short label of an acceptance criterion (1..criterion_count).
std::string criterion_label(int id);

// Criteria of a suite: all, resonance, identities, conservation, rates, completeness,
// convergence, or empty (no checks). Unknown names are a configuration error.
std::vector<int> suite_criteria(const std::string& suite);

// Runs one acceptance criterion on its fixed problem sizes. The seed selects the random data.
CheckResult run_criterion(int id, std::uint64_t seed = 1);

// Runs cfg.suite and writes the manifest into cfg.out.
RunManifest cmd_verify(const SimConfig& cfg);

}  // namespace rnls
