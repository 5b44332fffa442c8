#pragma once

#include <cstdint>
#include <vector>

#include "core/gbdt.hpp"

namespace betscan {

// A binned column is either one dense feature or an exclusive-feature
// bundle. In a bundle, bin 0 means "every member is zero" and each member
// owns a contiguous bin range for its nonzero values; split search walks
// member ranges so trees always refer to original features and thresholds.
struct ColumnMember {
    int feature = -1;
    int bin_begin = 0;  // first bin id of this member inside the column
    int bin_count = 0;
    std::vector<double> upper_bounds;  // per member bin, in original value space
};

struct BinnedColumn {
    std::vector<uint16_t> bins;  // per row
    int data_bins = 0;           // bins excluding the missing slot
    int missing_bin = -1;        // == data_bins when the column saw NaN
    bool is_bundle = false;
    std::vector<ColumnMember> members;

    int total_bins() const { return data_bins + (missing_bin >= 0 ? 1 : 0); }
};

struct BinnedDataset {
    size_t n_rows = 0;
    size_t n_features = 0;
    std::vector<BinnedColumn> columns;
};

// Quantile bin upper bounds for one value column: every distinct value gets
// its own bin when there are at most max_bins of them, otherwise greedy
// equal-count cuts. NaNs are left out (handled by the missing bin).
std::vector<double> quantile_bin_bounds(std::span<const double> values, int max_bins);

// Bins every feature into its own dense column.
BinnedDataset bin_dataset(ConstMatrixView X, int max_bins);

// Bins with exclusive-feature bundling: features are partitioned by
// `bundles` (see efb.hpp); multi-member bundles share one column.
BinnedDataset bin_dataset_bundled(ConstMatrixView X, int max_bins,
                                  const std::vector<std::vector<int>>& bundles);

}  // namespace betscan
