#include "betscan/betscan.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include "core/correction.hpp"
#include "core/csv.hpp"
#include "core/dataset.hpp"
#include "core/disasm.hpp"
#include "core/error.hpp"
#include "core/gbdt.hpp"
#include "core/hex.hpp"
#include "core/memory_trainer.hpp"
#include "core/metrics.hpp"
#include "core/opcode_features.hpp"
#include "core/pipeline.hpp"
#include "core/tx_graph.hpp"
#include "core/util.hpp"

namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error = "no error";

betscan_status status_of(betscan::ErrorKind kind) {
    switch (kind) {
        case betscan::ErrorKind::Io: return BETSCAN_ERR_IO;
        case betscan::ErrorKind::Parse: return BETSCAN_ERR_PARSE;
        case betscan::ErrorKind::Config: return BETSCAN_ERR_CONFIG;
        case betscan::ErrorKind::Schema: return BETSCAN_ERR_SCHEMA;
        case betscan::ErrorKind::Internal: return BETSCAN_ERR_INTERNAL;
    }
    return BETSCAN_ERR_INTERNAL;
}

template <typename Fn>
betscan_status guarded(Fn&& fn) {
    try {
        fn();
        return BETSCAN_OK;
    } catch (const betscan::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BETSCAN_ERR_INTERNAL;
    }
}

const char* require(const char* arg, const char* name) {
    if (!arg) betscan::raise(betscan::ErrorKind::Config, std::string(name) + " must not be NULL");
    return arg;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

// Training parameters shared by betscan_train and the pipeline.
struct TrainSpec {
    betscan::TrainingConfig tc;
    betscan::MemoryConfig mc;
    bool use_memory = true;
};

TrainSpec resolve_train_spec(const char* config_file) {
    betscan::KeyValueConfig cfg;
    if (config_file) cfg = betscan::KeyValueConfig::from_file(config_file);
    TrainSpec spec;
    spec.tc = betscan::TrainingConfig::from_config(cfg);
    spec.mc = betscan::MemoryConfig::from_config(cfg);
    spec.mc.seed = spec.tc.seed;
    spec.use_memory = cfg.get_bool("memory", true);
    return spec;
}

betscan::LabeledDataset joined_features(const char* features_csv, const char* labels_csv) {
    betscan::LabeledDataset ds = betscan::read_dataset(features_csv);
    if (!labels_csv) return ds;

    betscan::CsvReader reader(labels_csv);
    const int account_col = reader.column("account");
    const int label_col = reader.column("label");
    if (account_col < 0 || label_col < 0) {
        betscan::raise(betscan::ErrorKind::Parse,
                       std::string(labels_csv) + ": expected columns 'account' and 'label'");
    }
    std::unordered_map<std::string, int> labels;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        auto v = betscan::parse_int(fields[label_col]);
        if (!v || (*v != 1 && *v != 0 && *v != -1)) {
            betscan::raise(betscan::ErrorKind::Parse,
                           std::string(labels_csv) + ":" + std::to_string(reader.line_number()) +
                               ": invalid label '" + fields[label_col] + "'");
        }
        labels[fields[account_col]] = static_cast<int>(*v);
    }

    betscan::LabeledDataset joined(ds.feature_names());
    for (size_t i = 0; i < ds.num_rows(); ++i) {
        auto it = labels.find(ds.id(i));
        const int label = it == labels.end() ? ds.label(i) : it->second;
        joined.add_row(ds.id(i), std::vector<double>(ds.row(i), ds.row(i) + ds.num_features()), label);
    }
    return joined;
}

}  // namespace

extern "C" {

const char* betscan_version(void) { return "1.0.0"; }

const char* betscan_last_error(void) { return g_last_error.c_str(); }

void betscan_string_free(char* s) { delete[] s; }

betscan_status betscan_disassemble_hex(const char* bytecode_hex, const char* table_file,
                                       char** out_listing) {
    return guarded([&] {
        require(bytecode_hex, "bytecode_hex");
        require(reinterpret_cast<const char*>(out_listing), "out_listing");
        auto bytes = betscan::decode_hex(betscan::trim(bytecode_hex));
        if (!bytes) betscan::raise(betscan::ErrorKind::Parse, "malformed bytecode hex");
        const betscan::OpcodeTable table =
            table_file ? betscan::OpcodeTable::from_file(table_file) : betscan::OpcodeTable::evm_default();
        *out_listing = dup_string(betscan::format_listing(betscan::disassemble(*bytes, table)));
    });
}

betscan_status betscan_featurize_contracts(const char* contracts_csv, const char* schema_file,
                                           const char* out_features_csv) {
    return guarded([&] {
        const auto contracts = betscan::load_contracts_strict(require(contracts_csv, "contracts_csv"));
        const betscan::FeatureSchema schema = schema_file
                                                  ? betscan::FeatureSchema::load(schema_file)
                                                  : betscan::FeatureSchema::default_schema();
        betscan::write_dataset(betscan::featurize_contracts(contracts, schema),
                               require(out_features_csv, "out_features_csv"));
    });
}

betscan_status betscan_build_graphs(const char* transactions_csv, const char* addresses_csv,
                                    const char* out_dir) {
    return guarded([&] {
        const auto addresses = betscan::load_addresses_strict(require(addresses_csv, "addresses_csv"));
        const auto txs = betscan::load_transactions_strict(require(transactions_csv, "transactions_csv"));
        fs::create_directories(require(out_dir, "out_dir"));
        const betscan::TransactionIndex index(txs);
        for (const auto& addr : addresses) {
            const auto graph = index.graph_for(addr.account);
            betscan::write_edge_list(graph, (fs::path(out_dir) / (addr.account + ".edges.csv")).string());
        }
    });
}

betscan_status betscan_featurize_addresses_from_graphs(const char* graphs_dir,
                                                       const char* addresses_csv,
                                                       const char* out_features_csv) {
    return guarded([&] {
        const auto addresses = betscan::load_addresses_strict(require(addresses_csv, "addresses_csv"));
        betscan::LabeledDataset ds(betscan::GraphFeatureVector::names());
        for (const auto& addr : addresses) {
            const auto path = fs::path(require(graphs_dir, "graphs_dir")) / (addr.account + ".edges.csv");
            const auto graph = betscan::read_edge_list(addr.account, path.string());
            ds.add_row(addr.account, betscan::graph_features(graph).values(), addr.label);
        }
        betscan::write_dataset(ds, require(out_features_csv, "out_features_csv"));
    });
}

betscan_status betscan_featurize_addresses(const char* transactions_csv, const char* addresses_csv,
                                           const char* out_features_csv) {
    return guarded([&] {
        const auto addresses = betscan::load_addresses_strict(require(addresses_csv, "addresses_csv"));
        const auto txs = betscan::load_transactions_strict(require(transactions_csv, "transactions_csv"));
        betscan::write_dataset(betscan::featurize_addresses(addresses, txs),
                               require(out_features_csv, "out_features_csv"));
    });
}

betscan_status betscan_train(const char* features_csv, const char* labels_csv,
                             const char* config_file, const char* model_out,
                             const char* memory_out, const char* history_out) {
    return guarded([&] {
        const TrainSpec spec = resolve_train_spec(config_file);
        const betscan::LabeledDataset all =
            joined_features(require(features_csv, "features_csv"), labels_csv);
        const betscan::LabeledDataset labeled = all.subset(all.labeled_rows());

        if (spec.use_memory) {
            betscan::MemoryTrainResult result = betscan::train_with_memory(labeled, spec.tc, spec.mc);
            result.model.save(require(model_out, "model_out"));
            if (memory_out) result.memory.save(memory_out);
            if (history_out) betscan::write_history(result.history, history_out);
        } else {
            betscan::BoostedEnsemble model = betscan::train(labeled, spec.tc);
            model.save(require(model_out, "model_out"));
            if (memory_out) betscan::ReplayMemory().save(memory_out);
            if (history_out) betscan::write_history({}, history_out);
        }
    });
}

betscan_status betscan_predict_file(const char* model_file, const char* features_csv,
                                    const char* out_csv, double threshold) {
    return guarded([&] {
        const auto model = betscan::BoostedEnsemble::load(require(model_file, "model_file"));
        const auto features = betscan::read_dataset(require(features_csv, "features_csv"));
        const auto probas = model.predict_proba(features);
        betscan::write_predictions(require(out_csv, "out_csv"), features.ids(), probas,
                                   threshold < 0 ? 0.5 : threshold);
    });
}

betscan_status betscan_importance(const char* model_file, const char* out_csv, int top) {
    return guarded([&] {
        const auto model = betscan::BoostedEnsemble::load(require(model_file, "model_file"));
        const auto importance = model.feature_importance();
        betscan::CsvWriter out(require(out_csv, "out_csv"));
        out.write_row({"feature", "splits"});
        const size_t limit = top <= 0 ? importance.size() : static_cast<size_t>(top);
        for (size_t i = 0; i < importance.size() && i < limit; ++i) {
            out.write_row({importance[i].first, std::to_string(importance[i].second)});
        }
        out.close();
    });
}

struct betscan_model {
    betscan::BoostedEnsemble ensemble;
};

betscan_status betscan_model_open(const char* model_file, betscan_model** out_model) {
    return guarded([&] {
        require(reinterpret_cast<const char*>(out_model), "out_model");
        auto ensemble = betscan::BoostedEnsemble::load(require(model_file, "model_file"));
        *out_model = new betscan_model{std::move(ensemble)};
    });
}

void betscan_model_close(betscan_model* model) { delete model; }

int betscan_model_num_trees(const betscan_model* model) {
    return model ? static_cast<int>(model->ensemble.trees().size()) : 0;
}

int betscan_model_num_features(const betscan_model* model) {
    return model ? static_cast<int>(model->ensemble.feature_names().size()) : 0;
}

betscan_status betscan_model_predict(const betscan_model* model, const double* row, size_t width,
                                     double* out_proba) {
    return guarded([&] {
        if (!model) betscan::raise(betscan::ErrorKind::Config, "model must not be NULL");
        if (!row || !out_proba) betscan::raise(betscan::ErrorKind::Config, "row/out_proba must not be NULL");
        *out_proba = model->ensemble.predict_proba(row, width);
    });
}

betscan_status betscan_correct(const char* contract_preds_csv, const char* address_preds_csv,
                               const char* transactions_csv, double threshold,
                               const char* report_csv, const char* corrected_csv) {
    return guarded([&] {
        const auto contract_preds = betscan::read_predictions(require(contract_preds_csv, "contract_preds_csv"));
        const auto address_preds = betscan::read_predictions(require(address_preds_csv, "address_preds_csv"));
        const auto txs = betscan::load_transactions_strict(require(transactions_csv, "transactions_csv"));
        std::unordered_set<std::string> contracts(contract_preds.accounts.begin(),
                                                  contract_preds.accounts.end());
        std::unordered_set<std::string> addresses(address_preds.accounts.begin(),
                                                  address_preds.accounts.end());
        const auto index = betscan::build_association(txs, contracts, addresses);
        const auto report = betscan::apply_correction(contract_preds, address_preds, index, threshold);
        report.write(require(report_csv, "report_csv"));
        if (corrected_csv) {
            betscan::CsvWriter out(corrected_csv);
            out.write_row({"account", "predicted"});
            for (const auto& row : report.rows) {
                out.write_row({row.contract, std::to_string(row.posterior)});
            }
            out.close();
        }
    });
}

betscan_status betscan_evaluate(const char* predictions_csv, const char* labels_csv,
                                betscan_metrics* out) {
    return guarded([&] {
        if (!out) betscan::raise(betscan::ErrorKind::Config, "out must not be NULL");
        const auto preds = betscan::read_predictions(require(predictions_csv, "predictions_csv"));

        betscan::CsvReader reader(require(labels_csv, "labels_csv"));
        const int account_col = reader.column("account");
        const int label_col = reader.column("label");
        if (account_col < 0 || label_col < 0) {
            betscan::raise(betscan::ErrorKind::Parse,
                           std::string(labels_csv) + ": expected columns 'account' and 'label'");
        }
        std::vector<int> y, p;
        std::vector<std::string> fields;
        while (reader.next(fields)) {
            auto v = betscan::parse_int(fields[label_col]);
            if (!v || (*v != 1 && *v != 0 && *v != -1)) {
                betscan::raise(betscan::ErrorKind::Parse,
                               std::string(labels_csv) + ":" + std::to_string(reader.line_number()) +
                                   ": invalid label '" + fields[label_col] + "'");
            }
            if (*v == -1) continue;  // unlabeled rows are scored but never evaluated
            if (!preds.has(fields[account_col])) continue;
            y.push_back(static_cast<int>(*v));
            p.push_back(preds.at(fields[account_col]));
        }
        const auto m = betscan::evaluate(p, y);
        out->tp = static_cast<long long>(m.tp);
        out->fp = static_cast<long long>(m.fp);
        out->tn = static_cast<long long>(m.tn);
        out->fn = static_cast<long long>(m.fn);
        out->accuracy = m.accuracy;
        out->precision = m.precision;
        out->recall = m.recall;
        out->f1 = m.f1;
    });
}

betscan_status betscan_run_pipeline(const char* config_file, const char* const* overrides,
                                    size_t n_overrides) {
    return guarded([&] {
        betscan::KeyValueConfig cfg = betscan::KeyValueConfig::from_file(require(config_file, "config_file"));
        for (size_t i = 0; i < n_overrides; ++i) {
            cfg.set_pair(require(overrides[i], "override"));
        }
        betscan::run_pipeline(cfg, std::cout);
    });
}

}  // extern "C"
