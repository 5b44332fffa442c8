#include "core/memory_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace betscan {

bool ReplayMemory::add(ReplayEntry entry) {
    if (!ids_.insert(entry.id).second) return false;
    entries_.push_back(std::move(entry));
    return true;
}

void ReplayMemory::save(const std::string& path) const {
    CsvWriter out(path);
    out.write_row({"account", "label", "first_iteration"});
    for (const auto& e : entries_) {
        out.write_row({e.id, std::to_string(e.label), std::to_string(e.first_iteration)});
    }
    out.close();
}

void MemoryConfig::validate() const {
    if (replay_period < 1) raise(ErrorKind::Config, "replay_period must be >= 1");
    if (max_outer_iterations < 1) raise(ErrorKind::Config, "max_outer_iterations must be >= 1");
    if (tolerance < 0.0) raise(ErrorKind::Config, "tolerance must be >= 0");
}

MemoryConfig MemoryConfig::from_config(const KeyValueConfig& cfg, const std::string& prefix) {
    MemoryConfig mc;
    auto key = [&](const char* name) { return prefix + name; };
    mc.replay_period = static_cast<int>(cfg.get_int(key("replay_period"), mc.replay_period));
    mc.max_outer_iterations =
        static_cast<int>(cfg.get_int(key("max_outer_iterations"), mc.max_outer_iterations));
    mc.tolerance = cfg.get_double(key("tolerance"), mc.tolerance);
    mc.seed = static_cast<uint64_t>(cfg.get_int(key("seed"), static_cast<int64_t>(mc.seed)));
    mc.validate();
    return mc;
}

std::vector<int32_t> misclassified_rows(const BoostedEnsemble& model, const LabeledDataset& ds,
                                        double threshold) {
    const std::vector<double> probas = model.predict_proba(ds);
    std::vector<int32_t> rows;
    for (size_t i = 0; i < ds.num_rows(); ++i) {
        const int predicted = probas[i] >= threshold ? 1 : 0;
        if (predicted != ds.label(i)) rows.push_back(static_cast<int32_t>(i));
    }
    return rows;
}

ReplayMemory collect_misclassified(const BoostedEnsemble& model, const LabeledDataset& ds,
                                   double threshold, int iteration) {
    ReplayMemory memory;
    for (int32_t row : misclassified_rows(model, ds, threshold)) {
        memory.add({ds.id(row), row, ds.label(row), iteration});
    }
    return memory;
}

namespace {

std::vector<int32_t> replay_subset(const ReplayMemory& memory, size_t n_rows, Rng& draw_rng,
                                   ReplayRoundRecord& record) {
    std::vector<int32_t> rows;
    std::vector<bool> in_memory(n_rows, false);
    for (const auto& e : memory.entries()) {
        rows.push_back(e.row);
        in_memory[e.row] = true;
        record.memory_rows.push_back(e.row);
    }
    // Equal-count uniform draw from the non-memory part of the training
    // set, capped by the pool size.
    std::vector<int32_t> pool;
    pool.reserve(n_rows - rows.size());
    for (size_t i = 0; i < n_rows; ++i) {
        if (!in_memory[i]) pool.push_back(static_cast<int32_t>(i));
    }
    const size_t draw = std::min(rows.size(), pool.size());
    for (size_t d : draw_rng.sample_without_replacement(pool.size(), draw)) {
        rows.push_back(pool[d]);
        record.sampled_rows.push_back(pool[d]);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

MemoryTrainResult train_with_memory(const LabeledDataset& ds, const TrainingConfig& tc,
                                    const MemoryConfig& mc) {
    tc.validate();
    mc.validate();

    MemoryTrainResult result;
    double previous_loss = std::numeric_limits<double>::infinity();

    for (int iteration = 1; iteration <= mc.max_outer_iterations; ++iteration) {
        // Retrain from scratch; the training rng restarts from the same
        // seed, so with an empty memory every pass is plain training.
        BoostingSession session(ds, tc);
        Rng draw_rng(mc.seed + static_cast<uint64_t>(iteration) * 0x9e3779b97f4a7c15ULL);
        OuterIterationRecord record;
        record.iteration = iteration;

        for (int round = 1; round <= tc.rounds; ++round) {
            session.run_full_round();
            if (!result.memory.empty() && round % mc.replay_period == 0) {
                ReplayRoundRecord replay;
                replay.after_round = round;
                const auto rows = replay_subset(result.memory, ds.num_rows(), draw_rng, replay);
                session.run_subset_round(rows);
                record.replays.push_back(std::move(replay));
            }
        }

        record.rounds = static_cast<int>(session.rounds_run());
        const double loss = session.train_log_loss();
        record.train_loss = loss;
        result.model = session.snapshot_model();

        const auto mistakes = misclassified_rows(result.model, ds, tc.classification_threshold);
        for (int32_t row : mistakes) {
            result.memory.add({ds.id(row), row, ds.label(row), iteration});
        }
        record.memory_size = result.memory.size();
        result.history.push_back(std::move(record));

        // Algorithm loop guard: keep iterating while the loss is still
        // improving by more than the tolerance and mistakes remain.
        const double improvement = previous_loss - loss;
        previous_loss = loss;
        if (mistakes.empty()) break;
        if (iteration > 1 && improvement < mc.tolerance) break;
    }
    return result;
}

void write_history(const std::vector<OuterIterationRecord>& history, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"iteration", "rounds", "loss", "memory_size"});
    for (const auto& rec : history) {
        out.write_row({std::to_string(rec.iteration), std::to_string(rec.rounds),
                       format_double(rec.train_loss), std::to_string(rec.memory_size)});
    }
    out.close();
}

}  // namespace betscan
