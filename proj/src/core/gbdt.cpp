#include "core/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "core/binning.hpp"
#include "core/efb.hpp"
#include "core/error.hpp"
#include "core/tree.hpp"

namespace betscan {

void TrainingConfig::validate() const {
    if (rounds < 0) raise(ErrorKind::Config, "rounds must be >= 0");
    if (!(learning_rate > 0.0)) raise(ErrorKind::Config, "learning_rate must be > 0");
    if (max_leaves < 1) raise(ErrorKind::Config, "max_leaves must be >= 1");
    if (min_samples_leaf < 1) raise(ErrorKind::Config, "min_samples_leaf must be >= 1");
    if (lambda_l2 < 0.0) raise(ErrorKind::Config, "lambda_l2 must be >= 0");
    if (min_split_gain < 0.0) raise(ErrorKind::Config, "min_split_gain must be >= 0");
    if (max_bins < 2 || max_bins > 65000) raise(ErrorKind::Config, "max_bins must be in [2, 65000]");
    if (goss_top_rate < 0.0 || goss_top_rate > 1.0 || goss_other_rate < 0.0 || goss_other_rate > 1.0 ||
        goss_top_rate + goss_other_rate > 1.0 + 1e-12) {
        raise(ErrorKind::Config, "GOSS fractions must satisfy a, b in [0,1] and a + b <= 1");
    }
    if (efb_conflict_threshold < 0.0 || efb_conflict_threshold > 1.0) {
        raise(ErrorKind::Config, "efb_conflict_threshold must be in [0, 1]");
    }
    if (classification_threshold < 0.0 || classification_threshold > 1.0) {
        raise(ErrorKind::Config, "classification_threshold must be in [0, 1]");
    }
}

TrainingConfig TrainingConfig::from_config(const KeyValueConfig& cfg, const std::string& prefix) {
    TrainingConfig tc;
    auto key = [&](const char* name) { return prefix + name; };
    tc.rounds = static_cast<int>(cfg.get_int(key("rounds"), tc.rounds));
    tc.learning_rate = cfg.get_double(key("learning_rate"), tc.learning_rate);
    tc.max_leaves = static_cast<int>(cfg.get_int(key("max_leaves"), tc.max_leaves));
    tc.min_samples_leaf = static_cast<int>(cfg.get_int(key("min_samples_leaf"), tc.min_samples_leaf));
    tc.lambda_l2 = cfg.get_double(key("lambda_l2"), tc.lambda_l2);
    tc.min_split_gain = cfg.get_double(key("min_split_gain"), tc.min_split_gain);
    tc.max_bins = static_cast<int>(cfg.get_int(key("max_bins"), tc.max_bins));
    tc.use_goss = cfg.get_bool(key("use_goss"), tc.use_goss);
    tc.goss_top_rate = cfg.get_double(key("goss_top_rate"), tc.goss_top_rate);
    tc.goss_other_rate = cfg.get_double(key("goss_other_rate"), tc.goss_other_rate);
    tc.use_efb = cfg.get_bool(key("use_efb"), tc.use_efb);
    tc.efb_conflict_threshold = cfg.get_double(key("efb_conflict_threshold"), tc.efb_conflict_threshold);
    tc.classification_threshold = cfg.get_double(key("classification_threshold"), tc.classification_threshold);
    tc.seed = static_cast<uint64_t>(cfg.get_int(key("seed"), static_cast<int64_t>(tc.seed)));
    tc.validate();
    return tc;
}

double Tree::predict(const double* row) const {
    if (nodes_.empty()) return 0.0;
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf) {
        const double x = row[node->feature];
        if (std::isnan(x)) {
            node = &nodes_[node->default_left ? node->left : node->right];
        } else {
            node = &nodes_[x <= node->threshold ? node->left : node->right];
        }
    }
    return node->weight;
}

size_t Tree::num_leaves() const {
    size_t n = 0;
    for (const auto& node : nodes_) {
        if (node.is_leaf) ++n;
    }
    return n;
}

double BoostedEnsemble::predict_raw(const double* row, size_t width) const {
    if (!feature_names_.empty() && width != feature_names_.size()) {
        raise(ErrorKind::Schema, "feature row width " + std::to_string(width) + " does not match model width " +
                                     std::to_string(feature_names_.size()));
    }
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(row);
    return base_score_ + learning_rate_ * sum;
}

double BoostedEnsemble::predict_proba(const double* row, size_t width) const {
    return logistic(predict_raw(row, width));
}

std::vector<double> BoostedEnsemble::predict_proba(const LabeledDataset& ds) const {
    if (!schema_digest_.empty() && ds.schema_digest() != schema_digest_) {
        raise(ErrorKind::Schema, "feature table digest " + ds.schema_digest() +
                                     " does not match model digest " + schema_digest_);
    }
    std::vector<double> out(ds.num_rows());
    for (size_t i = 0; i < ds.num_rows(); ++i) {
        out[i] = predict_proba(ds.row(i), ds.num_features());
    }
    return out;
}

std::vector<std::pair<std::string, uint64_t>> BoostedEnsemble::feature_importance() const {
    std::vector<uint64_t> splits(feature_names_.size(), 0);
    for (const auto& tree : trees_) {
        for (const auto& node : tree.nodes()) {
            if (!node.is_leaf && node.feature >= 0 && node.feature < static_cast<int>(splits.size())) {
                ++splits[node.feature];
            }
        }
    }
    std::vector<size_t> order(splits.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return splits[a] > splits[b]; });
    std::vector<std::pair<std::string, uint64_t>> out;
    out.reserve(order.size());
    for (size_t f : order) out.emplace_back(feature_names_[f], splits[f]);
    return out;
}

bool BoostedEnsemble::operator==(const BoostedEnsemble& other) const {
    if (learning_rate_ != other.learning_rate_ || base_score_ != other.base_score_ ||
        schema_digest_ != other.schema_digest_ || feature_names_ != other.feature_names_ ||
        trees_.size() != other.trees_.size()) {
        return false;
    }
    for (size_t t = 0; t < trees_.size(); ++t) {
        const auto& a = trees_[t].nodes();
        const auto& b = other.trees_[t].nodes();
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_leaf != b[i].is_leaf || a[i].feature != b[i].feature ||
                a[i].threshold != b[i].threshold || a[i].default_left != b[i].default_left ||
                a[i].left != b[i].left || a[i].right != b[i].right || a[i].weight != b[i].weight) {
                return false;
            }
        }
    }
    return true;
}

double logistic(double raw) { return 1.0 / (1.0 + std::exp(-raw)); }

GradientState compute_gradients(std::span<const int> labels01, std::span<const double> raw_scores) {
    if (labels01.size() != raw_scores.size()) {
        raise(ErrorKind::Internal, "labels and raw scores must have equal length");
    }
    GradientState state;
    state.grad.resize(labels01.size());
    state.hess.resize(labels01.size());
    for (size_t i = 0; i < labels01.size(); ++i) {
        const double p = logistic(raw_scores[i]);
        state.grad[i] = p - static_cast<double>(labels01[i]);
        state.hess[i] = p * (1.0 - p);
    }
    return state;
}

double log_loss(std::span<const int> labels01, std::span<const double> raw_scores) {
    if (labels01.size() != raw_scores.size()) {
        raise(ErrorKind::Internal, "labels and raw scores must have equal length");
    }
    if (labels01.empty()) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < labels01.size(); ++i) {
        // -log p(y | raw) = log(1 + e^raw) - y*raw, computed stably.
        const double raw = raw_scores[i];
        const double softplus = raw > 0.0 ? raw + std::log1p(std::exp(-raw)) : std::log1p(std::exp(raw));
        sum += softplus - static_cast<double>(labels01[i]) * raw;
    }
    return sum / static_cast<double>(labels01.size());
}

struct BoostingSession::Impl {
    TrainingConfig cfg;
    std::string schema_digest;
    std::vector<std::string> feature_names;
    ConstMatrixView X;
    std::vector<int> labels01;
    BinnedDataset binned;
    std::vector<double> raw;
    std::vector<Tree> trees;
    std::vector<std::string> warnings;
    Rng rng;

    Impl(const LabeledDataset& ds, const TrainingConfig& config) : cfg(config), rng(config.seed) {
        cfg.validate();
        if (ds.num_rows() == 0) raise(ErrorKind::Config, "empty dataset");
        schema_digest = ds.schema_digest();
        feature_names = ds.feature_names();
        X = ConstMatrixView::of(ds);

        labels01.resize(ds.num_rows());
        size_t positives = 0;
        for (size_t i = 0; i < ds.num_rows(); ++i) {
            const int label = ds.label(i);
            if (label != 0 && label != 1) {
                raise(ErrorKind::Config, "row '" + ds.id(i) + "' has label " + std::to_string(label) +
                                             "; training labels must be 0/1 (exclude unlabeled rows)");
            }
            labels01[i] = label;
            positives += label;
        }
        if (positives == 0 || positives == ds.num_rows()) {
            warnings.push_back("training set has a single class; model will lean constant");
            std::cerr << "warning: " << warnings.back() << "\n";
        }

        if (cfg.use_efb) {
            binned = bin_dataset_bundled(X, cfg.max_bins, efb_plan(X, cfg.efb_conflict_threshold));
        } else {
            binned = bin_dataset(X, cfg.max_bins);
        }
        raw.assign(ds.num_rows(), 0.0);  // constant initial prediction
    }

    void append_tree(Tree tree) {
        for (size_t i = 0; i < raw.size(); ++i) {
            raw[i] += cfg.learning_rate * tree.predict(X.row(i));
        }
        trees.push_back(std::move(tree));
    }

    void run_full_round() {
        const GradientState grads = compute_gradients(labels01, raw);
        if (cfg.use_goss) {
            const GossResult sample = goss_sample(grads, cfg.goss_top_rate, cfg.goss_other_rate, rng);
            append_tree(grow_tree_binned(binned, grads, sample.indices, sample.weights, cfg));
        } else {
            std::vector<int32_t> rows(raw.size());
            for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int32_t>(i);
            append_tree(grow_tree_binned(binned, grads, rows, {}, cfg));
        }
    }

    void run_subset_round(std::span<const int32_t> rows) {
        if (rows.empty()) raise(ErrorKind::Internal, "replay round requires a non-empty subset");
        const GradientState grads = compute_gradients(labels01, raw);
        append_tree(grow_tree_binned(binned, grads, rows, {}, cfg));
    }
};

BoostingSession::BoostingSession(const LabeledDataset& ds, const TrainingConfig& cfg)
    : impl_(new Impl(ds, cfg)) {}

BoostingSession::~BoostingSession() { delete impl_; }

BoostingSession::BoostingSession(BoostingSession&& other) noexcept : impl_(other.impl_) {
    other.impl_ = nullptr;
}

void BoostingSession::run_full_round() { impl_->run_full_round(); }
void BoostingSession::run_subset_round(std::span<const int32_t> rows) { impl_->run_subset_round(rows); }

double BoostingSession::train_log_loss() const { return log_loss(impl_->labels01, impl_->raw); }
const std::vector<double>& BoostingSession::raw_scores() const { return impl_->raw; }
size_t BoostingSession::rounds_run() const { return impl_->trees.size(); }
const std::vector<std::string>& BoostingSession::warnings() const { return impl_->warnings; }

BoostedEnsemble BoostingSession::snapshot_model() const {
    return BoostedEnsemble(impl_->cfg.learning_rate, 0.0, impl_->schema_digest, impl_->feature_names,
                           impl_->trees);
}

BoostedEnsemble train(const LabeledDataset& ds, const TrainingConfig& cfg) {
    BoostingSession session(ds, cfg);
    for (int k = 0; k < cfg.rounds; ++k) session.run_full_round();
    return session.snapshot_model();
}

}  // namespace betscan
