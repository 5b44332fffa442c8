// betscan CLI: thin argument layer over the shared-library C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betscan/betscan.h"

namespace {

int fail(betscan_status status, const std::string& stage) {
    std::cerr << "error [" << stage << "]: " << betscan_last_error() << "\n";
    return status == BETSCAN_OK ? 1 : static_cast<int>(status);
}

std::vector<const char*> as_cstrs(const std::vector<std::string>& v) {
    std::vector<const char*> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gambling-contract and gambling-address detection toolchain"};
    app.require_subcommand(1);
    app.set_version_flag("--version", betscan_version());

    // disasm ------------------------------------------------------------
    std::string disasm_input, disasm_table;
    auto* disasm = app.add_subcommand("disasm", "disassemble bytecode hex (argument or file)");
    disasm->add_option("input", disasm_input, "0x-prefixed bytecode hex, or a file containing it")
        ->required();
    disasm->add_option("--table", disasm_table, "opcode table TSV overriding the built-in one");

    // featurize-contracts -------------------------------------------------
    std::string fc_contracts, fc_schema, fc_out;
    auto* fc = app.add_subcommand("featurize-contracts", "opcode-count features for a contract dataset");
    fc->add_option("--contracts", fc_contracts, "contracts CSV (account,bytecode,label)")->required();
    fc->add_option("--schema", fc_schema, "schema file, one mnemonic per line (default: built-in)");
    fc->add_option("--out", fc_out, "output feature table (<name>.features.csv)")->required();

    // build-graphs ---------------------------------------------------------
    std::string bg_txs, bg_addresses, bg_out;
    auto* bg = app.add_subcommand("build-graphs", "write per-address transaction edge lists");
    bg->add_option("--transactions", bg_txs, "transactions CSV (tx_id,from,to,value_wei)")->required();
    bg->add_option("--addresses", bg_addresses, "addresses CSV (account,label)")->required();
    bg->add_option("--out", bg_out, "output directory")->required();

    // featurize-addresses ----------------------------------------------------
    std::string fa_graphs, fa_txs, fa_addresses, fa_out;
    auto* fa = app.add_subcommand("featurize-addresses", "transaction-graph metrics per address");
    fa->add_option("--graphs", fa_graphs, "directory produced by build-graphs");
    fa->add_option("--transactions", fa_txs, "transactions CSV (alternative to --graphs)");
    fa->add_option("--addresses", fa_addresses, "addresses CSV (account,label)")->required();
    fa->add_option("--out", fa_out, "output feature table")->required();

    // train ------------------------------------------------------------------
    std::string tr_features, tr_labels, tr_config, tr_model, tr_memory, tr_history;
    std::vector<std::string> tr_sets;
    auto* tr = app.add_subcommand("train", "train the boosted classifier with replay memory");
    tr->add_option("--features", tr_features, "feature table CSV")->required();
    tr->add_option("--labels", tr_labels, "optional account,label CSV joined over the table");
    tr->add_option("--config", tr_config, "flat key=value training config");
    tr->add_option("--set", tr_sets, "config override key=value (repeatable)");
    tr->add_option("--model-out", tr_model, "output model file")->required();
    tr->add_option("--memory-out", tr_memory, "output replay-memory CSV");
    tr->add_option("--history-out", tr_history, "output per-iteration history CSV");

    // predict ------------------------------------------------------------------
    std::string pr_model, pr_features, pr_out;
    double pr_threshold = 0.5;
    auto* pr = app.add_subcommand("predict", "score a feature table with a trained model");
    pr->add_option("--model", pr_model, "model file")->required();
    pr->add_option("--features", pr_features, "feature table CSV")->required();
    pr->add_option("--out", pr_out, "output predictions CSV")->required();
    pr->add_option("--threshold", pr_threshold, "classification threshold (default 0.5)");

    // correct ---------------------------------------------------------------
    std::string co_contract_preds, co_address_preds, co_txs, co_report, co_corrected, co_labels;
    double co_threshold = 0.8;
    bool co_sweep = false;
    auto* co = app.add_subcommand("correct", "feedback-correct contract predictions");
    co->add_option("--contract-preds", co_contract_preds, "contract predictions CSV")->required();
    co->add_option("--address-preds", co_address_preds, "address predictions CSV")->required();
    co->add_option("--transactions", co_txs, "transactions CSV")->required();
    co->add_option("--threshold", co_threshold, "gambling-address fraction threshold (default 0.8)");
    co->add_option("--report", co_report, "output correction report CSV")->required();
    co->add_option("--corrected-out", co_corrected, "output corrected predictions CSV");
    co->add_flag("--sweep", co_sweep, "emit precision/recall per threshold (needs --labels)");
    co->add_option("--labels", co_labels, "account,label CSV for --sweep");

    // evaluate -----------------------------------------------------------------
    std::string ev_preds, ev_labels, ev_out;
    auto* ev = app.add_subcommand("evaluate", "confusion counts and accuracy/precision/recall/F1");
    ev->add_option("--predictions", ev_preds, "predictions CSV (account,predicted)")->required();
    ev->add_option("--labels", ev_labels, "account,label CSV (label -1 rows skipped)")->required();
    ev->add_option("--out", ev_out, "optional metrics CSV");

    // importance -----------------------------------------------------------------
    std::string im_model, im_out;
    int im_top = 0;
    auto* im = app.add_subcommand("importance", "split-count feature importance of a model");
    im->add_option("--model", im_model, "model file")->required();
    im->add_option("--out", im_out, "output CSV (default: stdout)");
    im->add_option("--top", im_top, "keep only the top N features");

    // pipeline -------------------------------------------------------------------
    std::string pl_config;
    std::vector<std::string> pl_sets;
    bool pl_no_correction = false;
    auto* pl = app.add_subcommand("pipeline", "end-to-end run driven by a config file");
    pl->add_option("--config", pl_config, "flat key=value pipeline config")->required();
    pl->add_option("--set", pl_sets, "config override key=value (repeatable)");
    pl->add_flag("--no-correction", pl_no_correction, "skip the feedback-correction stage");

    CLI11_PARSE(app, argc, argv);

    if (*disasm) {
        std::string hex = disasm_input;
        if (std::ifstream file(disasm_input); file) {
            std::ostringstream buf;
            buf << file.rdbuf();
            hex = buf.str();
        }
        char* listing = nullptr;
        const auto rc = betscan_disassemble_hex(hex.c_str(), disasm_table.empty() ? nullptr : disasm_table.c_str(),
                                                &listing);
        if (rc != BETSCAN_OK) return fail(rc, "disasm");
        std::fputs(listing, stdout);
        betscan_string_free(listing);
        return 0;
    }

    if (*fc) {
        const auto rc = betscan_featurize_contracts(fc_contracts.c_str(),
                                                    fc_schema.empty() ? nullptr : fc_schema.c_str(),
                                                    fc_out.c_str());
        return rc == BETSCAN_OK ? 0 : fail(rc, "featurize-contracts");
    }

    if (*bg) {
        const auto rc = betscan_build_graphs(bg_txs.c_str(), bg_addresses.c_str(), bg_out.c_str());
        return rc == BETSCAN_OK ? 0 : fail(rc, "build-graphs");
    }

    if (*fa) {
        if (fa_graphs.empty() == fa_txs.empty()) {
            std::cerr << "error [featurize-addresses]: exactly one of --graphs / --transactions required\n";
            return 1;
        }
        const auto rc = fa_graphs.empty()
                            ? betscan_featurize_addresses(fa_txs.c_str(), fa_addresses.c_str(), fa_out.c_str())
                            : betscan_featurize_addresses_from_graphs(fa_graphs.c_str(), fa_addresses.c_str(),
                                                                      fa_out.c_str());
        return rc == BETSCAN_OK ? 0 : fail(rc, "featurize-addresses");
    }

    if (*tr) {
        std::string config_path = tr_config;
        if (!tr_sets.empty()) {
            // Overrides are appended to a copy of the config file.
            config_path = tr_model + ".config.tmp";
            std::ofstream out(config_path, std::ios::trunc);
            if (!tr_config.empty()) {
                std::ifstream in(tr_config);
                out << in.rdbuf() << "\n";
            }
            for (const auto& kv : tr_sets) out << kv << "\n";
        }
        const auto rc = betscan_train(tr_features.c_str(), tr_labels.empty() ? nullptr : tr_labels.c_str(),
                                      config_path.empty() ? nullptr : config_path.c_str(), tr_model.c_str(),
                                      tr_memory.empty() ? nullptr : tr_memory.c_str(),
                                      tr_history.empty() ? nullptr : tr_history.c_str());
        if (!tr_sets.empty()) std::remove(config_path.c_str());
        return rc == BETSCAN_OK ? 0 : fail(rc, "train");
    }

    if (*pr) {
        const auto rc = betscan_predict_file(pr_model.c_str(), pr_features.c_str(), pr_out.c_str(), pr_threshold);
        return rc == BETSCAN_OK ? 0 : fail(rc, "predict");
    }

    if (*co) {
        if (co_sweep) {
            if (co_labels.empty()) {
                std::cerr << "error [correct]: --sweep requires --labels\n";
                return 1;
            }
            std::printf("threshold,accuracy,precision,recall,f1\n");
            for (int pct = 0; pct <= 100; pct += 5) {
                const double threshold = pct / 100.0;
                const std::string report = co_report + ".sweep.tmp";
                const std::string corrected = co_report + ".sweep.preds.tmp";
                auto rc = betscan_correct(co_contract_preds.c_str(), co_address_preds.c_str(), co_txs.c_str(),
                                          threshold, report.c_str(), corrected.c_str());
                if (rc != BETSCAN_OK) return fail(rc, "correct");
                betscan_metrics m{};
                rc = betscan_evaluate(corrected.c_str(), co_labels.c_str(), &m);
                std::remove(report.c_str());
                std::remove(corrected.c_str());
                if (rc != BETSCAN_OK) return fail(rc, "correct");
                std::printf("%.2f,%.6f,%.6f,%.6f,%.6f\n", threshold, m.accuracy, m.precision, m.recall, m.f1);
            }
            return 0;
        }
        const auto rc = betscan_correct(co_contract_preds.c_str(), co_address_preds.c_str(), co_txs.c_str(),
                                        co_threshold, co_report.c_str(),
                                        co_corrected.empty() ? nullptr : co_corrected.c_str());
        return rc == BETSCAN_OK ? 0 : fail(rc, "correct");
    }

    if (*ev) {
        betscan_metrics m{};
        const auto rc = betscan_evaluate(ev_preds.c_str(), ev_labels.c_str(), &m);
        if (rc != BETSCAN_OK) return fail(rc, "evaluate");
        std::printf("tp=%lld fp=%lld tn=%lld fn=%lld\n", m.tp, m.fp, m.tn, m.fn);
        std::printf("accuracy=%.6f precision=%.6f recall=%.6f f1=%.6f\n", m.accuracy, m.precision, m.recall,
                    m.f1);
        if (!ev_out.empty()) {
            std::ofstream out(ev_out, std::ios::trunc);
            out << "tp,fp,tn,fn,accuracy,precision,recall,f1\n"
                << m.tp << ',' << m.fp << ',' << m.tn << ',' << m.fn << ',' << m.accuracy << ','
                << m.precision << ',' << m.recall << ',' << m.f1 << "\n";
        }
        return 0;
    }

    if (*im) {
        const std::string out_path = im_out.empty() ? im_model + ".importance.tmp" : im_out;
        const auto rc = betscan_importance(im_model.c_str(), out_path.c_str(), im_top);
        if (rc != BETSCAN_OK) return fail(rc, "importance");
        if (im_out.empty()) {
            std::ifstream in(out_path);
            std::cout << in.rdbuf();
            in.close();
            std::remove(out_path.c_str());
        }
        return 0;
    }

    if (*pl) {
        if (pl_no_correction) pl_sets.push_back("correction=off");
        const auto overrides = as_cstrs(pl_sets);
        const auto rc = betscan_run_pipeline(pl_config.c_str(), overrides.data(), overrides.size());
        return rc == BETSCAN_OK ? 0 : fail(rc, "pipeline");
    }

    return 0;
}
