// Acceptance gate: runs all twelve verification criteria at full instance
// counts and prints one pass/fail line per criterion.
#include <cstdio>

#include "mwk/suite.hpp"

int main() {
    auto results = mwk::run_suite();
    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d %-24s %7.2fs  %s\n",
                    r.pass ? "PASS" : "FAIL", r.number, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
