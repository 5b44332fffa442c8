#pragma once

#include <vector>

#include "core/gbdt.hpp"

namespace betscan {

// Exclusive feature bundling. Conflict rate between two features is
// |rows where both are nonzero| / |rows where at least one is nonzero|
// (0 when no row has either). Features are greedily packed, in descending
// nonzero-count order, into the first bundle whose members all conflict at
// most `threshold` with the candidate; otherwise a new bundle is opened.
// Only finite, non-negative, NaN-free columns are eligible for packing;
// anything else stays in a singleton bundle.
struct EfbBundling {
    std::vector<std::vector<int>> bundles;  // partition of feature indices
    std::vector<double> offsets;            // per original feature; 0 outside multi-bundles
    // One column per bundle: 0 when all members are zero, otherwise the
    // nonzero member's value shifted by its offset (the member packed last
    // wins when a conflict row has several nonzero members).
    std::vector<std::vector<double>> bundled_columns;
};

// Partition only (used by training to bundle at the histogram level).
std::vector<std::vector<int>> efb_plan(ConstMatrixView X, double conflict_threshold);

EfbBundling efb_bundle(ConstMatrixView X, double conflict_threshold);

}  // namespace betscan
