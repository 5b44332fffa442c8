#pragma once

#include "core/binning.hpp"
#include "core/gbdt.hpp"

namespace betscan {

// Histogram-based best-first tree growth over pre-binned columns. `rows`
// are dataset row indices (ascending); `weights` is aligned with `rows`
// (empty means all ones). Trees refer to original feature indices and raw
// value thresholds, so prediction never needs the binning.
Tree grow_tree_binned(const BinnedDataset& binned, const GradientState& grads,
                      std::span<const int32_t> rows, std::span<const double> weights,
                      const TrainingConfig& cfg);

}  // namespace betscan
