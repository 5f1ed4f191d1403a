// Acceptance battery at desk scale. One pass/fail line per criterion;
// exit status is the number of failed criteria.

#include <cstdlib>
#include <iostream>

#include "qse/selftest.hpp"

int main(int argc, char** argv) {
    qse::SelfTestOptions options;
    if (argc > 1) options.replicates = std::atol(argv[1]);
    if (const char* env = std::getenv("QSE_ACCEPTANCE_REPLICATES"))
        options.replicates = std::atol(env);
    const int failures = qse::run_acceptance(options, std::cout);
    std::cout << (failures == 0 ? "acceptance: all criteria passed\n"
                                : "acceptance: " + std::to_string(failures) +
                                      " criteria failed\n");
    return failures;
}
