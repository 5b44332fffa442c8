#include "core/tree.hpp"

#include <cmath>
#include <queue>

#include "core/error.hpp"

namespace betscan {

namespace {

struct BinStat {
    double g = 0.0;
    double h = 0.0;
    uint32_t cnt = 0;

    BinStat& operator+=(const BinStat& o) {
        g += o.g;
        h += o.h;
        cnt += o.cnt;
        return *this;
    }
    BinStat& operator-=(const BinStat& o) {
        g -= o.g;
        h -= o.h;
        cnt -= o.cnt;
        return *this;
    }
};

struct SplitChoice {
    bool valid = false;
    double gain = 0.0;
    int column = -1;
    int member = -1;
    int boundary = -2;  // member-local last bin on the left; -1 = zeros-only (bundle)
    bool missing_left = true;
    double threshold = 0.0;
    BinStat left, right;
};

struct LeafState {
    int node_id = 0;
    size_t begin = 0, end = 0;  // range in the shared index buffer
    BinStat total;
    std::vector<BinStat> hist;
    SplitChoice best;
};

double leaf_objective(const BinStat& s, double lambda) {
    const double denom = s.h + lambda;
    if (denom <= 0.0) return 0.0;
    return s.g * s.g / denom;
}

class TreeGrower {
public:
    TreeGrower(const BinnedDataset& binned, const GradientState& grads,
               std::span<const int32_t> rows, std::span<const double> weights,
               const TrainingConfig& cfg)
        : binned_(binned), grads_(grads), cfg_(cfg) {
        col_offset_.resize(binned.columns.size());
        total_bins_ = 0;
        for (size_t c = 0; c < binned.columns.size(); ++c) {
            col_offset_[c] = total_bins_;
            total_bins_ += binned.columns[c].total_bins();
        }
        indices_.assign(rows.begin(), rows.end());
        weight_of_.assign(grads.size(), 1.0);
        if (!weights.empty()) {
            for (size_t i = 0; i < rows.size(); ++i) weight_of_[rows[i]] = weights[i];
        }
    }

    Tree grow() {
        nodes_.clear();
        nodes_.emplace_back();  // root
        LeafState root;
        root.node_id = 0;
        root.begin = 0;
        root.end = indices_.size();
        build_histogram(root);
        find_best_split(root);
        leaves_.push_back(std::move(root));
        if (leaves_[0].best.valid) heap_.emplace(leaves_[0].best.gain, 0);

        int leaf_count = 1;
        while (leaf_count < cfg_.max_leaves && !heap_.empty()) {
            auto [gain, neg_leaf] = heap_.top();
            heap_.pop();
            split_leaf(static_cast<size_t>(-neg_leaf));
            ++leaf_count;
        }

        for (const auto& leaf : leaves_) {
            if (!nodes_[leaf.node_id].is_leaf) continue;
            nodes_[leaf.node_id].weight = leaf_weight(leaf.total);
        }
        return Tree(std::move(nodes_));
    }

private:
    double leaf_weight(const BinStat& s) const {
        const double denom = s.h + cfg_.lambda_l2;
        double w = denom > 0.0 ? -s.g / denom : 0.0;
        if (w == 0.0) w = 0.0;  // normalize -0
        return w;
    }

    void build_histogram(LeafState& leaf) {
        leaf.hist.assign(total_bins_, BinStat{});
        leaf.total = BinStat{};
        for (size_t i = leaf.begin; i < leaf.end; ++i) {
            const int32_t row = indices_[i];
            const double w = weight_of_[row];
            leaf.total += BinStat{grads_.grad[row] * w, grads_.hess[row] * w, 1};
        }
        for (size_t c = 0; c < binned_.columns.size(); ++c) {
            const auto& bins = binned_.columns[c].bins;
            BinStat* stats = leaf.hist.data() + col_offset_[c];
            for (size_t i = leaf.begin; i < leaf.end; ++i) {
                const int32_t row = indices_[i];
                const double w = weight_of_[row];
                stats[bins[row]] += BinStat{grads_.grad[row] * w, grads_.hess[row] * w, 1};
            }
        }
    }

    // gain = 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma
    bool consider(SplitChoice& best, const BinStat& left, const BinStat& right,
                  const BinStat& total, int column, int member, int boundary,
                  bool missing_left, double threshold) const {
        const auto msl = static_cast<uint32_t>(cfg_.min_samples_leaf);
        if (left.cnt < msl || right.cnt < msl) return false;
        if (left.h + cfg_.lambda_l2 <= 0.0 || right.h + cfg_.lambda_l2 <= 0.0) return false;
        const double gain = 0.5 * (leaf_objective(left, cfg_.lambda_l2) +
                                   leaf_objective(right, cfg_.lambda_l2) -
                                   leaf_objective(total, cfg_.lambda_l2)) -
                            cfg_.min_split_gain;
        if (!std::isfinite(gain) || gain <= 0.0) return false;
        if (best.valid && gain <= best.gain) return false;
        best = SplitChoice{true, gain, column, member, boundary, missing_left, threshold, left, right};
        return true;
    }

    void find_best_split(LeafState& leaf) {
        leaf.best = SplitChoice{};
        if (leaf.end - leaf.begin < 2 * static_cast<size_t>(cfg_.min_samples_leaf)) return;

        for (size_t c = 0; c < binned_.columns.size(); ++c) {
            const auto& col = binned_.columns[c];
            const BinStat* stats = leaf.hist.data() + col_offset_[c];
            BinStat missing{};
            if (col.missing_bin >= 0) missing = stats[col.missing_bin];
            const bool has_missing = col.missing_bin >= 0 && missing.cnt > 0;

            for (size_t m = 0; m < col.members.size(); ++m) {
                const auto& member = col.members[m];
                if (col.is_bundle) {
                    // Rows with a zero member value (bin 0 or another
                    // member's range) always fall on the left of any
                    // threshold, since bundled values are non-negative.
                    BinStat member_total{};
                    for (int b = 0; b < member.bin_count; ++b) {
                        member_total += stats[member.bin_begin + b];
                    }
                    BinStat zero_side = leaf.total;
                    zero_side -= member_total;
                    BinStat left = zero_side;
                    for (int k = -1; k + 1 < member.bin_count; ++k) {
                        if (k >= 0) left += stats[member.bin_begin + k];
                        BinStat right = leaf.total;
                        right -= left;
                        const double threshold = k < 0 ? 0.0 : member.upper_bounds[k];
                        consider(leaf.best, left, right, leaf.total, static_cast<int>(c),
                                 static_cast<int>(m), k, true, threshold);
                    }
                } else {
                    BinStat data_total = leaf.total;
                    data_total -= missing;
                    BinStat prefix{};
                    for (int k = 0; k + 1 < member.bin_count; ++k) {
                        prefix += stats[member.bin_begin + k];
                        const double threshold = member.upper_bounds[k];
                        if (has_missing) {
                            BinStat left_ml = prefix;
                            left_ml += missing;
                            BinStat right_ml = data_total;
                            right_ml -= prefix;
                            consider(leaf.best, left_ml, right_ml, leaf.total, static_cast<int>(c),
                                     static_cast<int>(m), k, true, threshold);
                            BinStat right_mr = data_total;
                            right_mr -= prefix;
                            right_mr += missing;
                            consider(leaf.best, prefix, right_mr, leaf.total, static_cast<int>(c),
                                     static_cast<int>(m), k, false, threshold);
                        } else {
                            BinStat right = leaf.total;
                            right -= prefix;
                            consider(leaf.best, prefix, right, leaf.total, static_cast<int>(c),
                                     static_cast<int>(m), k, true, threshold);
                        }
                    }
                }
            }
        }
    }

    bool goes_left(int32_t row, const SplitChoice& s) const {
        const auto& col = binned_.columns[s.column];
        const uint16_t bin = col.bins[row];
        if (col.missing_bin >= 0 && bin == col.missing_bin) return s.missing_left;
        if (col.is_bundle) {
            const auto& member = col.members[s.member];
            if (bin < member.bin_begin || bin >= member.bin_begin + member.bin_count) {
                return true;  // member value is zero
            }
            return static_cast<int>(bin) <= member.bin_begin + s.boundary;
        }
        return static_cast<int>(bin) <= s.boundary;
    }

    void split_leaf(size_t leaf_idx) {
        // Move out: leaves_ may reallocate when children are appended.
        LeafState parent = std::move(leaves_[leaf_idx]);
        const SplitChoice& s = parent.best;

        // Stable partition of the index range.
        scratch_.clear();
        scratch_.reserve(parent.end - parent.begin);
        size_t left_fill = parent.begin;
        for (size_t i = parent.begin; i < parent.end; ++i) {
            const int32_t row = indices_[i];
            if (goes_left(row, s)) {
                indices_[left_fill++] = row;
            } else {
                scratch_.push_back(row);
            }
        }
        std::copy(scratch_.begin(), scratch_.end(), indices_.begin() + left_fill);
        const size_t mid = left_fill;

        const auto& member = binned_.columns[s.column].members[s.member];
        TreeNode& node = nodes_[parent.node_id];
        node.is_leaf = false;
        node.feature = member.feature;
        node.threshold = s.threshold;
        node.default_left = s.missing_left;
        node.left = static_cast<int>(nodes_.size());
        node.right = node.left + 1;
        nodes_.emplace_back();
        nodes_.emplace_back();

        LeafState left_leaf, right_leaf;
        left_leaf.node_id = node.left;
        left_leaf.begin = parent.begin;
        left_leaf.end = mid;
        left_leaf.total = s.left;
        right_leaf.node_id = node.right;
        right_leaf.begin = mid;
        right_leaf.end = parent.end;
        right_leaf.total = s.right;

        // Build the smaller child's histogram; derive the sibling's by
        // subtraction from the parent's.
        LeafState* small = (left_leaf.end - left_leaf.begin <= right_leaf.end - right_leaf.begin)
                               ? &left_leaf
                               : &right_leaf;
        LeafState* large = small == &left_leaf ? &right_leaf : &left_leaf;
        build_histogram(*small);
        large->hist = std::move(parent.hist);
        for (size_t i = 0; i < large->hist.size(); ++i) large->hist[i] -= small->hist[i];
        // Subtraction drifts the totals computed during build_histogram;
        // keep the exact split stats instead.
        small->total = small == &left_leaf ? s.left : s.right;

        find_best_split(left_leaf);
        find_best_split(right_leaf);
        if (left_leaf.best.valid) {
            heap_.emplace(left_leaf.best.gain, -static_cast<int64_t>(leaves_.size()));
        }
        leaves_.push_back(std::move(left_leaf));
        if (right_leaf.best.valid) {
            heap_.emplace(right_leaf.best.gain, -static_cast<int64_t>(leaves_.size()));
        }
        leaves_.push_back(std::move(right_leaf));
    }

    const BinnedDataset& binned_;
    const GradientState& grads_;
    const TrainingConfig& cfg_;
    std::vector<size_t> col_offset_;
    size_t total_bins_ = 0;
    std::vector<int32_t> indices_;
    std::vector<int32_t> scratch_;
    std::vector<double> weight_of_;
    std::vector<TreeNode> nodes_;
    std::vector<LeafState> leaves_;
    std::priority_queue<std::pair<double, int64_t>> heap_;
};

}  // namespace

Tree grow_tree_binned(const BinnedDataset& binned, const GradientState& grads,
                      std::span<const int32_t> rows, std::span<const double> weights,
                      const TrainingConfig& cfg) {
    if (!weights.empty() && weights.size() != rows.size()) {
        raise(ErrorKind::Internal, "sample weights not aligned with sample indices");
    }
    TreeGrower grower(binned, grads, rows, weights, cfg);
    return grower.grow();
}

Tree grow_tree(ConstMatrixView features, const GradientState& grads,
               std::span<const double> weights, const TrainingConfig& cfg) {
    if (grads.size() != features.rows) {
        raise(ErrorKind::Internal, "gradient state not aligned with feature rows");
    }
    const BinnedDataset binned = bin_dataset(features, cfg.max_bins);
    std::vector<int32_t> rows(features.rows);
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int32_t>(i);
    return grow_tree_binned(binned, grads, rows, weights, cfg);
}

}  // namespace betscan
