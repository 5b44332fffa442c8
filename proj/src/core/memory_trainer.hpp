#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "core/gbdt.hpp"

namespace betscan {

// Store of previously misclassified training samples. Entries are added,
// never evicted, and a sample re-misclassified later is not duplicated.
struct ReplayEntry {
    std::string id;
    int32_t row = -1;  // row in the training dataset
    int label = 0;
    int first_iteration = 0;  // outer iteration that added the entry
};

class ReplayMemory {
public:
    // Returns true when the id was new.
    bool add(ReplayEntry entry);
    bool contains(const std::string& id) const { return ids_.count(id) > 0; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<ReplayEntry>& entries() const { return entries_; }

    void save(const std::string& path) const;

private:
    std::vector<ReplayEntry> entries_;  // insertion order
    std::unordered_set<std::string> ids_;
};

struct MemoryConfig {
    int replay_period = 5;         // k: full rounds between replay rounds
    int max_outer_iterations = 5;
    double tolerance = 1e-4;       // stop when loss improves by less than this
    uint64_t seed = 1;

    void validate() const;
    static MemoryConfig from_config(const KeyValueConfig& cfg, const std::string& prefix = "");
};

// Rows whose thresholded prediction disagrees with the label.
std::vector<int32_t> misclassified_rows(const BoostedEnsemble& model, const LabeledDataset& ds,
                                        double threshold);
ReplayMemory collect_misclassified(const BoostedEnsemble& model, const LabeledDataset& ds,
                                   double threshold, int iteration = 0);

struct ReplayRoundRecord {
    int after_round = 0;  // replay inserted after this many full rounds
    std::vector<int32_t> memory_rows;
    std::vector<int32_t> sampled_rows;  // the equal-size random complement
};

struct OuterIterationRecord {
    int iteration = 0;   // 1-based
    int rounds = 0;      // trees grown this iteration (full + replay)
    double train_loss = 0.0;
    size_t memory_size = 0;  // after collecting this iteration's mistakes
    std::vector<ReplayRoundRecord> replays;
};

struct MemoryTrainResult {
    BoostedEnsemble model;
    ReplayMemory memory;
    std::vector<OuterIterationRecord> history;
};

// Outer loop of the replay trainer: train on the full data, remember the
// misclassified samples, then retrain from scratch with one replay round
// after every k full rounds (replay subset = all memory samples plus an
// equal-count uniform draw from the rest of the training set), until the
// training log-loss stops improving by more than the tolerance or the
// iteration budget is used up. With an empty memory this is exactly plain
// training.
MemoryTrainResult train_with_memory(const LabeledDataset& ds, const TrainingConfig& tc,
                                    const MemoryConfig& mc);

// history CSV: iteration,rounds,loss,memory_size
void write_history(const std::vector<OuterIterationRecord>& history, const std::string& path);

}  // namespace betscan
