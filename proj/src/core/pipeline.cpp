#include "core/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "core/correction.hpp"
#include "core/csv.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/gbdt.hpp"
#include "core/memory_trainer.hpp"
#include "core/opcode_features.hpp"
#include "core/split.hpp"
#include "core/tx_graph.hpp"
#include "core/util.hpp"

namespace fs = std::filesystem;

namespace betscan {

namespace {

struct Paths {
    std::string out;
    std::string p(const char* name) const { return (fs::path(out) / name).string(); }
};

void write_importance(const std::vector<std::pair<std::string, uint64_t>>& importance,
                      const std::string& path, size_t top) {
    CsvWriter out(path);
    out.write_row({"feature", "splits"});
    for (size_t i = 0; i < importance.size() && i < top; ++i) {
        out.write_row({importance[i].first, std::to_string(importance[i].second)});
    }
    out.close();
}

// Test-fold metrics: join predictions with dataset labels over split rows.
MetricsReport fold_metrics(const LabeledDataset& ds, const DatasetSplit& split,
                           const PredictionSet& preds) {
    std::vector<int> y, p;
    for (size_t row : split.test_rows) {
        if (ds.label(row) == kLabelUnlabeled) continue;
        if (!preds.has(ds.id(row))) {
            raise(ErrorKind::Internal, "missing prediction for test account " + ds.id(row));
        }
        y.push_back(ds.label(row));
        p.push_back(preds.at(ds.id(row)));
    }
    return evaluate(p, y);
}

void train_and_persist(const LabeledDataset& features, const DatasetSplit& split,
                       const TrainingConfig& tc, const MemoryConfig& mc, bool use_memory,
                       const std::string& model_path, const std::string& memory_path,
                       const std::string& history_path) {
    const LabeledDataset train_ds = features.subset(split.train_rows);
    if (use_memory) {
        MemoryTrainResult result = train_with_memory(train_ds, tc, mc);
        result.model.save(model_path);
        result.memory.save(memory_path);
        write_history(result.history, history_path);
    } else {
        BoostedEnsemble model = train(train_ds, tc);
        model.save(model_path);
        ReplayMemory().save(memory_path);
        std::vector<int> labels01(train_ds.labels().begin(), train_ds.labels().end());
        std::vector<double> raw(train_ds.num_rows());
        for (size_t i = 0; i < train_ds.num_rows(); ++i) {
            raw[i] = model.predict_raw(train_ds.row(i), train_ds.num_features());
        }
        OuterIterationRecord record;
        record.iteration = 1;
        record.rounds = tc.rounds;
        record.train_loss = log_loss(labels01, raw);
        record.memory_size = 0;
        write_history({record}, history_path);
    }
}

void predict_and_persist(const std::string& model_path, const std::string& features_path,
                         const std::string& out_path, double threshold) {
    const BoostedEnsemble model = BoostedEnsemble::load(model_path);
    const LabeledDataset features = read_dataset(features_path);
    const std::vector<double> probas = model.predict_proba(features);
    write_predictions(out_path, features.ids(), probas, threshold);
}

}  // namespace

PipelineResult run_pipeline(const KeyValueConfig& cfg, std::ostream& log) {
    for (const char* key : {"contracts", "transactions", "out_dir"}) {
        if (!cfg.has(key)) raise(ErrorKind::Config, std::string("pipeline config missing key '") + key + "'");
    }
    const std::string contracts_path = cfg.get_string("contracts", "");
    const std::string addresses_path = cfg.get_string("addresses", "");
    const std::string transactions_path = cfg.get_string("transactions", "");

    Paths paths{cfg.get_string("out_dir", "")};
    fs::create_directories(paths.out);

    SplitSpec split_spec;
    split_spec.train_fraction = cfg.get_double("split.fraction", 0.8);
    split_spec.seed = static_cast<uint64_t>(cfg.get_int("split.seed", 7));
    split_spec.validate();

    const auto base_seed = cfg.get_int("seed", 1);
    const bool use_memory = cfg.get_bool("memory", true);
    const bool use_correction = cfg.get_bool("correction", true);
    const double correction_threshold = cfg.get_double("correction.threshold", 0.8);

    KeyValueConfig seeded = cfg;
    if (!seeded.has("contract.seed")) seeded.set("contract.seed", std::to_string(base_seed));
    if (!seeded.has("address.seed")) seeded.set("address.seed", std::to_string(base_seed));
    const TrainingConfig contract_tc = TrainingConfig::from_config(seeded, "contract.");
    const TrainingConfig address_tc = TrainingConfig::from_config(seeded, "address.");
    MemoryConfig contract_mc = MemoryConfig::from_config(seeded, "contract.");
    MemoryConfig address_mc = MemoryConfig::from_config(seeded, "address.");
    contract_mc.seed = contract_tc.seed;
    address_mc.seed = address_tc.seed;

    PipelineResult result;
    result.out_dir = paths.out;

    auto stage = [&](const char* name, const std::vector<std::string>& outputs,
                     const std::function<void()>& body) {
        log << "[" << name << "] running\n";
        try {
            body();
        } catch (const std::exception& e) {
            for (const auto& out : outputs) {
                if (fs::exists(out)) fs::rename(out, out + ".partial");
            }
            raise(ErrorKind::Internal, std::string("stage ") + name + " failed: " + e.what());
        }
    };

    // --- contract side -----------------------------------------------------
    stage("contract-features",
          {paths.p("contracts.features.csv"), paths.p("contracts.schema"), paths.p("opcode_schema.txt")}, [&] {
              const auto contracts = load_contracts_strict(contracts_path);
              const FeatureSchema schema = cfg.has("schema")
                                               ? FeatureSchema::load(cfg.get_string("schema", ""))
                                               : FeatureSchema::default_schema();
              schema.save(paths.p("opcode_schema.txt"));
              write_dataset(featurize_contracts(contracts, schema), paths.p("contracts.features.csv"));
          });

    stage("contract-split", {paths.p("contracts.split.csv")}, [&] {
        const LabeledDataset features = read_dataset(paths.p("contracts.features.csv"));
        write_split(features, split_dataset(features, split_spec), paths.p("contracts.split.csv"));
    });

    stage("contract-train",
          {paths.p("contract.model.txt"), paths.p("contract.memory.csv"), paths.p("contract.history.csv")}, [&] {
              const LabeledDataset features = read_dataset(paths.p("contracts.features.csv"));
              const DatasetSplit split = read_split(features, paths.p("contracts.split.csv"));
              train_and_persist(features, split, contract_tc, contract_mc, use_memory,
                                paths.p("contract.model.txt"), paths.p("contract.memory.csv"),
                                paths.p("contract.history.csv"));
          });

    stage("contract-predict", {paths.p("contracts.predictions.csv")}, [&] {
        predict_and_persist(paths.p("contract.model.txt"), paths.p("contracts.features.csv"),
                            paths.p("contracts.predictions.csv"), contract_tc.classification_threshold);
    });

    // --- address side ------------------------------------------------------
    bool address_data_present = false;
    if (!addresses_path.empty()) {
        const auto probe = load_addresses_strict(addresses_path);
        address_data_present = !probe.empty();
        if (!address_data_present) {
            log << "[address-features] skipped: address file is empty\n";
        }
    } else {
        log << "[address-features] skipped: no address file configured\n";
    }
    result.address_stages_ran = address_data_present;

    if (address_data_present) {
        stage("address-features", {paths.p("addresses.features.csv"), paths.p("addresses.schema")}, [&] {
            const auto addresses = load_addresses_strict(addresses_path);
            const auto txs = load_transactions_strict(transactions_path);
            write_dataset(featurize_addresses(addresses, txs), paths.p("addresses.features.csv"));
        });

        stage("address-split", {paths.p("addresses.split.csv")}, [&] {
            const LabeledDataset features = read_dataset(paths.p("addresses.features.csv"));
            write_split(features, split_dataset(features, split_spec), paths.p("addresses.split.csv"));
        });

        stage("address-train",
              {paths.p("address.model.txt"), paths.p("address.memory.csv"), paths.p("address.history.csv")}, [&] {
                  const LabeledDataset features = read_dataset(paths.p("addresses.features.csv"));
                  const DatasetSplit split = read_split(features, paths.p("addresses.split.csv"));
                  train_and_persist(features, split, address_tc, address_mc, use_memory,
                                    paths.p("address.model.txt"), paths.p("address.memory.csv"),
                                    paths.p("address.history.csv"));
              });

        stage("address-predict", {paths.p("addresses.predictions.csv")}, [&] {
            predict_and_persist(paths.p("address.model.txt"), paths.p("addresses.features.csv"),
                                paths.p("addresses.predictions.csv"), address_tc.classification_threshold);
        });
    }

    // --- correction ---------------------------------------------------------
    result.correction_ran = use_correction && address_data_present;
    if (result.correction_ran) {
        stage("correction", {paths.p("correction.csv"), paths.p("contracts.predictions.corrected.csv")}, [&] {
            const PredictionSet contract_preds = read_predictions(paths.p("contracts.predictions.csv"));
            const PredictionSet address_preds = read_predictions(paths.p("addresses.predictions.csv"));
            const auto txs = load_transactions_strict(transactions_path);
            std::unordered_set<std::string> contract_set(contract_preds.accounts.begin(),
                                                         contract_preds.accounts.end());
            std::unordered_set<std::string> address_set(address_preds.accounts.begin(),
                                                        address_preds.accounts.end());
            const AssociationIndex index = build_association(txs, contract_set, address_set);
            const CorrectionReport report =
                apply_correction(contract_preds, address_preds, index, correction_threshold);
            report.write(paths.p("correction.csv"));

            CsvWriter corrected(paths.p("contracts.predictions.corrected.csv"));
            corrected.write_row({"account", "predicted"});
            for (const auto& row : report.rows) {
                corrected.write_row({row.contract, std::to_string(row.posterior)});
            }
            corrected.close();
        });
    } else if (use_correction) {
        log << "[correction] skipped: address predictions unavailable\n";
    } else {
        log << "[correction] skipped: disabled\n";
    }

    // --- evaluation ----------------------------------------------------------
    std::vector<std::string> eval_outputs = {paths.p("metrics.csv"), paths.p("contract.importance.csv")};
    if (address_data_present) eval_outputs.push_back(paths.p("address.importance.csv"));
    stage("evaluate", eval_outputs, [&] {
        const LabeledDataset contract_features = read_dataset(paths.p("contracts.features.csv"));
        const DatasetSplit contract_split = read_split(contract_features, paths.p("contracts.split.csv"));
        const PredictionSet contract_preds = read_predictions(paths.p("contracts.predictions.csv"));
        result.contract_metrics = fold_metrics(contract_features, contract_split, contract_preds);

        std::string metrics = metrics_csv_header() + "\n";
        metrics += metrics_csv_row("contract_without_correction", result.contract_metrics) + "\n";

        if (result.correction_ran) {
            const PredictionSet corrected = read_predictions(paths.p("contracts.predictions.corrected.csv"));
            result.contract_corrected_metrics = fold_metrics(contract_features, contract_split, corrected);
            metrics += metrics_csv_row("contract_with_correction", result.contract_corrected_metrics) + "\n";
        }
        if (address_data_present) {
            const LabeledDataset address_features = read_dataset(paths.p("addresses.features.csv"));
            const DatasetSplit address_split = read_split(address_features, paths.p("addresses.split.csv"));
            const PredictionSet address_preds = read_predictions(paths.p("addresses.predictions.csv"));
            result.address_metrics = fold_metrics(address_features, address_split, address_preds);
            metrics += metrics_csv_row("address", result.address_metrics) + "\n";
        }
        write_text_file(paths.p("metrics.csv"), metrics);

        result.contract_importance = BoostedEnsemble::load(paths.p("contract.model.txt")).feature_importance();
        write_importance(result.contract_importance, paths.p("contract.importance.csv"), 10);
        if (address_data_present) {
            result.address_importance = BoostedEnsemble::load(paths.p("address.model.txt")).feature_importance();
            write_importance(result.address_importance, paths.p("address.importance.csv"), 10);
        }
    });

    log << "[done] artifacts in " << paths.out << "\n";
    return result;
}

}  // namespace betscan
