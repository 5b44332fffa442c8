#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/util.hpp"

namespace betscan {

struct ConstMatrixView {
    const double* data = nullptr;
    size_t rows = 0;
    size_t cols = 0;

    const double* row(size_t r) const { return data + r * cols; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }

    static ConstMatrixView of(const LabeledDataset& ds) {
        return {ds.values().data(), ds.num_rows(), ds.num_features()};
    }
};

struct TrainingConfig {
    int rounds = 100;               // K boosting rounds
    double learning_rate = 0.1;     // shrinkage applied to every tree output
    int max_leaves = 31;
    int min_samples_leaf = 20;
    double lambda_l2 = 1.0;         // L2 penalty on leaf weights
    double min_split_gain = 0.0;    // gamma: per-split gain cost
    int max_bins = 255;
    bool use_goss = true;
    double goss_top_rate = 0.2;     // a: kept large-gradient fraction
    double goss_other_rate = 0.1;   // b: sampled small-gradient fraction
    bool use_efb = true;
    double efb_conflict_threshold = 0.0;
    double classification_threshold = 0.5;
    uint64_t seed = 1;

    void validate() const;  // raises Error{Config} on out-of-range values

    // Reads `<prefix>rounds`, `<prefix>learning_rate`, ... from a flat
    // key=value config, keeping defaults for absent keys.
    static TrainingConfig from_config(const KeyValueConfig& cfg, const std::string& prefix = "");
};

struct TreeNode {
    bool is_leaf = true;
    // split fields
    int feature = -1;
    double threshold = 0.0;
    bool default_left = true;  // route for missing values
    int left = -1;
    int right = -1;
    // leaf field
    double weight = 0.0;
};

class Tree {
public:
    Tree() = default;
    explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    double predict(const double* row) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    size_t num_leaves() const;

private:
    std::vector<TreeNode> nodes_;  // root at index 0
};

// Additive model: raw(x) = base_score + learning_rate * sum_k tree_k(x),
// probability = logistic(raw).
class BoostedEnsemble {
public:
    BoostedEnsemble() = default;
    BoostedEnsemble(double learning_rate, double base_score, std::string schema_digest,
                    std::vector<std::string> feature_names, std::vector<Tree> trees)
        : learning_rate_(learning_rate),
          base_score_(base_score),
          schema_digest_(std::move(schema_digest)),
          feature_names_(std::move(feature_names)),
          trees_(std::move(trees)) {}

    double predict_raw(const double* row, size_t width) const;
    double predict_proba(const double* row, size_t width) const;

    // Batch prediction with schema verification; raises Error{Schema} when
    // the dataset's feature digest differs from the model's.
    std::vector<double> predict_proba(const LabeledDataset& ds) const;

    // (feature name, split count), descending count, ties by feature index.
    std::vector<std::pair<std::string, uint64_t>> feature_importance() const;

    double learning_rate() const { return learning_rate_; }
    double base_score() const { return base_score_; }
    const std::string& schema_digest() const { return schema_digest_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<Tree>& trees() const { return trees_; }

    // Self-describing text format; round-trips bit-exactly.
    void save(const std::string& path) const;
    static BoostedEnsemble load(const std::string& path);

    bool operator==(const BoostedEnsemble& other) const;

private:
    double learning_rate_ = 0.1;
    double base_score_ = 0.0;
    std::string schema_digest_;
    std::vector<std::string> feature_names_;
    std::vector<Tree> trees_;
};

// Logistic-loss derivatives at the current raw scores: g = p - y,
// h = p * (1 - p) with p = logistic(raw).
struct GradientState {
    std::vector<double> grad;
    std::vector<double> hess;

    size_t size() const { return grad.size(); }
};

double logistic(double raw);
GradientState compute_gradients(std::span<const int> labels01, std::span<const double> raw_scores);
// Mean logistic negative log-likelihood.
double log_loss(std::span<const int> labels01, std::span<const double> raw_scores);

// Gradient-based one-side sampling: the ceil(a*n) samples of largest |g|
// (ties by ascending index) keep weight 1; ceil(b*n) of the rest are drawn
// uniformly without replacement and weighted by (1-a)/b. Indices are
// returned in ascending order.
struct GossResult {
    std::vector<int32_t> indices;
    std::vector<double> weights;  // aligned with indices
};
GossResult goss_sample(const GradientState& grads, double top_rate, double other_rate, Rng& rng);
GossResult goss_sample(const GradientState& grads, double top_rate, double other_rate, uint64_t seed);

// Grows one regression tree on (features, gradients) with histogram splits.
// `weights` may be empty (all ones). Exposed for tests and single-tree use;
// train() reuses the same growth code on pre-binned data.
Tree grow_tree(ConstMatrixView features, const GradientState& grads,
               std::span<const double> weights, const TrainingConfig& cfg);

// One boosting run over a dataset whose labels are already {0,1}-coded
// ({1,0} dataset convention maps 1->1, 0->0; -1 rows must be excluded by
// the caller). Also the building block of the memory trainer, which
// interleaves full rounds with replay rounds.
class BoostingSession {
public:
    BoostingSession(const LabeledDataset& ds, const TrainingConfig& cfg);
    ~BoostingSession();
    BoostingSession(BoostingSession&&) noexcept;
    BoostingSession& operator=(BoostingSession&&) noexcept = delete;

    void run_full_round();
    // Replay round: gradient statistics come only from `rows`; GOSS is not
    // applied. Empty subsets are rejected by the caller.
    void run_subset_round(std::span<const int32_t> rows);

    double train_log_loss() const;
    const std::vector<double>& raw_scores() const;
    size_t rounds_run() const;
    const std::vector<std::string>& warnings() const;

    BoostedEnsemble snapshot_model() const;

private:
    struct Impl;
    Impl* impl_;
};

// K full boosting rounds; deterministic given (dataset, config, seed).
BoostedEnsemble train(const LabeledDataset& ds, const TrainingConfig& cfg);

}  // namespace betscan
