#pragma once

#include <string>
#include <vector>

/**
 * The verification suite: twelve numbered criteria covering structure tables,
 * presentation relations, residue axioms, reciprocity, degree formulas,
 * transfer comparisons, Scheja-Storch forms, homotopy invariance, projective
 * line class invariants, and the residue/transfer rule calculus.
 */
namespace mwk {

struct SuiteResult {
    int number = 0;        // 1..12
    std::string name;
    bool pass = false;
    std::string detail;    // failure description, or a short tally
    double seconds = 0.0;
};

/**
 * Runs the criteria whose name contains `filter` (all when empty). `quick`
 * shrinks the randomized instance counts (used by the script command).
 */
std::vector<SuiteResult> run_suite(const std::string& filter = "", bool quick = false);

}  // namespace mwk
