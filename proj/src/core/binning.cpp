#include "core/binning.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace betscan {

std::vector<double> quantile_bin_bounds(std::span<const double> values, int max_bins) {
    std::vector<double> sorted;
    sorted.reserve(values.size());
    for (double v : values) {
        if (!std::isnan(v)) sorted.push_back(v);
    }
    std::sort(sorted.begin(), sorted.end());

    // Distinct values with multiplicities.
    std::vector<std::pair<double, size_t>> distinct;
    for (double v : sorted) {
        if (distinct.empty() || distinct.back().first != v) {
            distinct.emplace_back(v, 1);
        } else {
            ++distinct.back().second;
        }
    }

    std::vector<double> bounds;
    if (distinct.empty()) return bounds;
    if (static_cast<int>(distinct.size()) <= max_bins) {
        for (const auto& [v, _] : distinct) bounds.push_back(v);
        return bounds;
    }

    size_t remaining = sorted.size();
    int bins_left = max_bins;
    size_t acc = 0;
    for (size_t i = 0; i < distinct.size(); ++i) {
        acc += distinct[i].second;
        const size_t target = (remaining + bins_left - 1) / bins_left;
        const bool last_value = i + 1 == distinct.size();
        if ((acc >= target && bins_left > 1) || last_value) {
            bounds.push_back(distinct[i].first);
            remaining -= acc;
            acc = 0;
            if (bins_left > 1) --bins_left;
        }
    }
    return bounds;
}

namespace {

// Index of the first bound >= v; values above the last bound clamp into the
// last bin (only possible at prediction time, never for training rows).
uint16_t bin_of(double v, const std::vector<double>& bounds) {
    auto it = std::lower_bound(bounds.begin(), bounds.end(), v);
    if (it == bounds.end()) --it;
    return static_cast<uint16_t>(it - bounds.begin());
}

BinnedColumn bin_dense_column(ConstMatrixView X, int feature, int max_bins) {
    std::vector<double> column(X.rows);
    bool has_nan = false;
    for (size_t r = 0; r < X.rows; ++r) {
        column[r] = X.at(r, feature);
        has_nan |= std::isnan(column[r]);
    }
    BinnedColumn col;
    col.is_bundle = false;
    ColumnMember member;
    member.feature = feature;
    member.bin_begin = 0;
    member.upper_bounds = quantile_bin_bounds(column, max_bins);
    if (member.upper_bounds.empty()) member.upper_bounds.push_back(0.0);  // all-NaN column
    member.bin_count = static_cast<int>(member.upper_bounds.size());
    col.data_bins = member.bin_count;
    col.missing_bin = has_nan ? col.data_bins : -1;
    col.bins.resize(X.rows);
    for (size_t r = 0; r < X.rows; ++r) {
        col.bins[r] = std::isnan(column[r]) ? static_cast<uint16_t>(col.missing_bin)
                                            : bin_of(column[r], member.upper_bounds);
    }
    col.members.push_back(std::move(member));
    return col;
}

BinnedColumn bin_bundle_column(ConstMatrixView X, const std::vector<int>& features, int max_bins) {
    BinnedColumn col;
    col.is_bundle = true;
    col.bins.assign(X.rows, 0);  // bin 0: all members zero
    int next_bin = 1;
    for (int feature : features) {
        // Bins over the member's nonzero values only.
        std::vector<double> nonzero;
        for (size_t r = 0; r < X.rows; ++r) {
            const double v = X.at(r, feature);
            if (v != 0.0) nonzero.push_back(v);
        }
        ColumnMember member;
        member.feature = feature;
        member.bin_begin = next_bin;
        member.upper_bounds = quantile_bin_bounds(nonzero, max_bins);
        if (member.upper_bounds.empty()) member.upper_bounds.push_back(0.0);  // all-zero member
        member.bin_count = static_cast<int>(member.upper_bounds.size());
        next_bin += member.bin_count;
        for (size_t r = 0; r < X.rows; ++r) {
            const double v = X.at(r, feature);
            if (v != 0.0) {
                col.bins[r] = static_cast<uint16_t>(member.bin_begin + bin_of(v, member.upper_bounds));
            }
        }
        col.members.push_back(std::move(member));
    }
    col.data_bins = next_bin;
    col.missing_bin = -1;  // bundles are built only from NaN-free features
    return col;
}

}  // namespace

BinnedDataset bin_dataset(ConstMatrixView X, int max_bins) {
    BinnedDataset out;
    out.n_rows = X.rows;
    out.n_features = X.cols;
    out.columns.reserve(X.cols);
    for (size_t f = 0; f < X.cols; ++f) {
        out.columns.push_back(bin_dense_column(X, static_cast<int>(f), max_bins));
    }
    return out;
}

BinnedDataset bin_dataset_bundled(ConstMatrixView X, int max_bins,
                                  const std::vector<std::vector<int>>& bundles) {
    BinnedDataset out;
    out.n_rows = X.rows;
    out.n_features = X.cols;
    size_t covered = 0;
    for (const auto& bundle : bundles) {
        if (bundle.empty()) raise(ErrorKind::Internal, "empty feature bundle");
        covered += bundle.size();
        if (bundle.size() == 1) {
            out.columns.push_back(bin_dense_column(X, bundle[0], max_bins));
        } else {
            out.columns.push_back(bin_bundle_column(X, bundle, max_bins));
        }
    }
    if (covered != X.cols) raise(ErrorKind::Internal, "feature bundles do not partition the feature set");
    return out;
}

}  // namespace betscan
