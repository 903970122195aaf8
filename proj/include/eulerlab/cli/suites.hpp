#pragma once
// Named property suites. Each runs randomized instances of one identity and
// reports a tally per identity, plus one entry per failing instance.
#include <cstdint>
#include <string>
#include <vector>

#include "eulerlab/cli/report.hpp"
#include "eulerlab/lfunction.hpp"

namespace eulerlab::cli {

struct SuiteOptions {
  i64 p = 3;
  int prec = 0;   // 0: the suite's default working precision
  int level = 2;  // highest level n of G_n
  std::uint64_t seed = 1;
};

const std::vector<std::string>& suite_names();

// Frobenius samples used by the delta checks: ordinary a_p within the Hasse
// bound, supersingular a_p in {0, p} when allowed, and both multiplicative
// types.
std::vector<Frobenius> delta_samples(i64 p, int N);
// UnknownSuite for names outside suite_names().
Report run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace eulerlab::cli
