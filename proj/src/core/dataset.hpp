#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace betscan {

using BigUint = boost::multiprecision::cpp_int;

// Labels follow the dataset convention: 1 = gambling, 0 = non-gambling,
// -1 = unlabeled ("other"); unlabeled rows are kept through ingestion and
// scored, but excluded from supervised training and metrics.
inline constexpr int kLabelGambling = 1;
inline constexpr int kLabelNonGambling = 0;
inline constexpr int kLabelUnlabeled = -1;

struct ContractRecord {
    std::string account;       // canonical 0x + 40 lowercase hex digits
    std::string bytecode_hex;  // canonical 0x + even-length lowercase hex
    int label = kLabelUnlabeled;

    bool unlabeled() const { return label == kLabelUnlabeled; }
    std::vector<uint8_t> bytecode() const;
};

struct AddressRecord {
    std::string account;
    int label = kLabelUnlabeled;

    bool unlabeled() const { return label == kLabelUnlabeled; }
};

struct TransactionRecord {
    std::string tx_id;
    std::string from;
    std::string to;
    BigUint value_wei;  // non-negative, arbitrary precision
};

struct RowDiagnostic {
    size_t line = 0;  // physical line in the source file
    std::string message;
};

template <typename Record>
struct LoadResult {
    std::vector<Record> records;
    std::vector<RowDiagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

// Loaders keep every well-formed row (order preserved) and report every
// malformed row as a diagnostic carrying its line number; nothing is
// silently dropped. File-level problems (missing file, bad header,
// duplicate tx ids) raise Error.
LoadResult<ContractRecord> load_contracts(const std::string& path);
LoadResult<AddressRecord> load_addresses(const std::string& path);
LoadResult<TransactionRecord> load_transactions(const std::string& path);

// Strict variants raise Error{Parse} when any row diagnostic was produced.
std::vector<ContractRecord> load_contracts_strict(const std::string& path);
std::vector<AddressRecord> load_addresses_strict(const std::string& path);
std::vector<TransactionRecord> load_transactions_strict(const std::string& path);

void write_contracts(const std::vector<ContractRecord>& records, const std::string& path);
void write_addresses(const std::vector<AddressRecord>& records, const std::string& path);
void write_transactions(const std::vector<TransactionRecord>& records, const std::string& path);

// Fixed-width numeric feature table: one row per entity, plus the dataset
// label so a written table round-trips completely.
class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::vector<std::string> feature_names);

    void add_row(std::string id, std::vector<double> features, int label);

    size_t num_rows() const { return ids_.size(); }
    size_t num_features() const { return feature_names_.size(); }

    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<double>& values() const { return values_; }

    const double* row(size_t i) const { return values_.data() + i * num_features(); }
    double at(size_t row, size_t col) const { return values_[row * num_features() + col]; }
    int label(size_t i) const { return labels_[i]; }
    const std::string& id(size_t i) const { return ids_[i]; }

    // Digest over the ordered feature names; models carry it so that a
    // model is only ever applied to compatible feature tables.
    std::string schema_digest() const;

    // Row indices with label != -1.
    std::vector<size_t> labeled_rows() const;
    LabeledDataset subset(const std::vector<size_t>& rows) const;

    bool operator==(const LabeledDataset& other) const = default;

private:
    std::vector<std::string> ids_;
    std::vector<std::string> feature_names_;
    std::vector<double> values_;  // row-major
    std::vector<int> labels_;
};

// Feature tables persist as `<name>.features.csv` plus a `<name>.schema`
// sidecar (feature names + content digest). Round-trip is bit-exact,
// including 64-bit float values and column order.
void write_dataset(const LabeledDataset& ds, const std::string& csv_path);
LabeledDataset read_dataset(const std::string& csv_path);

// Path of the sidecar belonging to a features CSV.
std::string schema_sidecar_path(const std::string& csv_path);

}  // namespace betscan
