// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one verdict line per criterion. Exit status is the number of failures.

#include <cstdio>

#include "gapfield/verify.hpp"

int main() {
    gapfield::AcceptanceOptions opts;
    opts.workers = 1;
    opts.verbose = true;
    const auto results = gapfield::run_acceptance(opts);
    std::fputs(gapfield::render_verdicts(results).c_str(), stdout);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    return failures;
}
