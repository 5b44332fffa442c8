#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/metrics.hpp"

namespace betscan {

// Keys understood by the pipeline (flat key=value file, CLI --set overrides):
//   contracts, addresses, transactions   input CSV paths
//   out_dir                              output directory (created)
//   schema                               optional opcode schema file
//   split.fraction (0.8), split.seed (7) stratified train/test split
//   seed (1)                             base training seed
//   memory (on)                          replay-memory training on/off
//   correction (on), correction.threshold (0.8)
//   contract.<param>, address.<param>    per-classifier training parameters:
//     rounds, learning_rate, max_leaves, min_samples_leaf, lambda_l2,
//     min_split_gain, max_bins, use_goss, goss_top_rate, goss_other_rate,
//     use_efb, efb_conflict_threshold, classification_threshold, seed,
//     replay_period, max_outer_iterations, tolerance
struct PipelineResult {
    std::string out_dir;
    bool address_stages_ran = false;
    bool correction_ran = false;
    MetricsReport contract_metrics;            // test fold, uncorrected
    MetricsReport contract_corrected_metrics;  // test fold, corrected
    MetricsReport address_metrics;             // test fold
    std::vector<std::pair<std::string, uint64_t>> contract_importance;
    std::vector<std::pair<std::string, uint64_t>> address_importance;
};

// Runs disassembly -> contract features -> contract classifier -> graphs ->
// address features -> address classifier -> correction -> evaluation,
// leaving every artifact in out_dir. A stage failure aborts with the stage
// name in the message and renames that stage's partial outputs to
// `<file>.partial`.
PipelineResult run_pipeline(const KeyValueConfig& cfg, std::ostream& log);

}  // namespace betscan
