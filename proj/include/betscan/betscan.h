/* betscan — gambling-activity detection over EVM bytecode and transaction
 * records. C API: opaque handles, integer status codes, thread-local error
 * messages. All functions returning betscan_status give BETSCAN_OK (0) on
 * success; on failure, betscan_last_error() describes the problem.
 */
#ifndef BETSCAN_H
#define BETSCAN_H

#include <stddef.h>

#ifndef BETSCAN_API
#if defined(_WIN32)
#define BETSCAN_API
#else
#define BETSCAN_API __attribute__((visibility("default")))
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum betscan_status {
    BETSCAN_OK = 0,
    BETSCAN_ERR_IO = 1,       /* file missing / unreadable / unwritable */
    BETSCAN_ERR_PARSE = 2,    /* malformed input data */
    BETSCAN_ERR_CONFIG = 3,   /* bad parameter or option value */
    BETSCAN_ERR_SCHEMA = 4,   /* feature schema / model digest mismatch */
    BETSCAN_ERR_INTERNAL = 5, /* unexpected failure */
} betscan_status;

BETSCAN_API const char* betscan_version(void);

/* Message for the most recent failing call on this thread; never NULL. */
BETSCAN_API const char* betscan_last_error(void);

/* Frees strings returned through char** out-parameters. */
BETSCAN_API void betscan_string_free(char* s);

/* --- disassembly --------------------------------------------------------- */

/* Decodes 0x-prefixed bytecode hex into a listing with one instruction per
 * line: `offset mnemonic [operand-hex]`. Caller frees *out_listing. When
 * table_file is non-NULL it overrides the built-in instruction table. */
BETSCAN_API betscan_status betscan_disassemble_hex(const char* bytecode_hex, const char* table_file,
                                       char** out_listing);

/* --- feature extraction --------------------------------------------------- */

/* contracts CSV (account,bytecode,label) -> opcode-count feature table.
 * schema_file (one mnemonic per line) is optional; the default schema is
 * used when NULL. Writes `out_features_csv` plus its `.schema` sidecar. */
BETSCAN_API betscan_status betscan_featurize_contracts(const char* contracts_csv, const char* schema_file,
                                           const char* out_features_csv);

/* Writes one edge-list CSV per listed address under out_dir. */
BETSCAN_API betscan_status betscan_build_graphs(const char* transactions_csv, const char* addresses_csv,
                                    const char* out_dir);

/* Per-address transaction-graph metrics from edge lists produced by
 * betscan_build_graphs. */
BETSCAN_API betscan_status betscan_featurize_addresses_from_graphs(const char* graphs_dir,
                                                       const char* addresses_csv,
                                                       const char* out_features_csv);

/* Same metrics computed straight from the transactions file. */
BETSCAN_API betscan_status betscan_featurize_addresses(const char* transactions_csv, const char* addresses_csv,
                                           const char* out_features_csv);

/* --- training and prediction ---------------------------------------------- */

/* Trains on a feature table (rows with label -1 are ignored). config_file
 * is an optional flat key=value file (rounds, learning_rate, max_leaves,
 * min_samples_leaf, lambda_l2, min_split_gain, max_bins, use_goss,
 * goss_top_rate, goss_other_rate, use_efb, efb_conflict_threshold,
 * classification_threshold, seed, memory, replay_period,
 * max_outer_iterations, tolerance). labels_csv optionally joins labels by
 * account on top of the table's own label column. memory_out and
 * history_out may be NULL. */
BETSCAN_API betscan_status betscan_train(const char* features_csv, const char* labels_csv,
                             const char* config_file, const char* model_out,
                             const char* memory_out, const char* history_out);

/* Applies a model file to a feature table; writes account,proba,predicted.
 * threshold < 0 selects the threshold stored in the training config
 * default (0.5). */
BETSCAN_API betscan_status betscan_predict_file(const char* model_file, const char* features_csv,
                                    const char* out_csv, double threshold);

/* Split-count feature importance as CSV (feature,splits), most important
 * first; top <= 0 means all features. */
BETSCAN_API betscan_status betscan_importance(const char* model_file, const char* out_csv, int top);

/* In-memory prediction over a single feature row. */
typedef struct betscan_model betscan_model;
BETSCAN_API betscan_status betscan_model_open(const char* model_file, betscan_model** out_model);
BETSCAN_API void betscan_model_close(betscan_model* model);
BETSCAN_API int betscan_model_num_trees(const betscan_model* model);
BETSCAN_API int betscan_model_num_features(const betscan_model* model);
BETSCAN_API betscan_status betscan_model_predict(const betscan_model* model, const double* row, size_t width,
                                     double* out_proba);

/* --- correction and evaluation -------------------------------------------- */

/* Flips gambling-predicted contracts whose gambling-predicted associated
 * address fraction is strictly below threshold. Writes the per-contract
 * report to report_csv and, when corrected_csv is non-NULL, the corrected
 * account,predicted table. */
BETSCAN_API betscan_status betscan_correct(const char* contract_preds_csv, const char* address_preds_csv,
                               const char* transactions_csv, double threshold,
                               const char* report_csv, const char* corrected_csv);

typedef struct betscan_metrics {
    long long tp, fp, tn, fn;
    double accuracy, precision, recall, f1;
} betscan_metrics;

/* Joins predictions (account,predicted) with labels (account,label CSV;
 * rows labeled -1 are skipped) and fills *out. */
BETSCAN_API betscan_status betscan_evaluate(const char* predictions_csv, const char* labels_csv,
                                betscan_metrics* out);

/* --- pipeline -------------------------------------------------------------- */

/* End-to-end run driven by a flat key=value config file (see the train
 * keys above plus: contracts, addresses, transactions, out_dir, schema,
 * split.fraction, split.seed, seed, memory, correction,
 * correction.threshold, contract.*, address.*). overrides is an optional
 * array of "key=value" strings applied after the file. */
BETSCAN_API betscan_status betscan_run_pipeline(const char* config_file, const char* const* overrides,
                                    size_t n_overrides);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BETSCAN_H */
