#ifndef QSE_SELFTEST_HPP
#define QSE_SELFTEST_HPP

#include <cstdint>
#include <ostream>

namespace qse {

struct SelfTestOptions {
    long replicates = 15000;
    std::uint64_t seed = 1;
    int workers = 0;
    bool verbose = true; // progress notes while the sweeps run
};

// Runs the full verification battery at desk scale and prints one
// pass/fail line per criterion. Returns the number of failed criteria.
// Criteria with pinned tolerances assume the default replicate count;
// a reduced count speeds things up but can push Monte Carlo noise past
// the tolerances.
int run_acceptance(const SelfTestOptions& options, std::ostream& out);

} // namespace qse

#endif
