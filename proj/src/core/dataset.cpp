#include "core/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/hex.hpp"
#include "core/util.hpp"

namespace betscan {

namespace {

void require_header(const CsvReader& reader, const std::vector<std::string>& expected) {
    if (reader.header() != expected) {
        std::string want;
        for (size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        raise(ErrorKind::Parse, reader.path() + ": expected header '" + want + "'");
    }
}

std::optional<int> parse_label(std::string_view text) {
    auto v = parse_int(text);
    if (!v || (*v != 1 && *v != 0 && *v != -1)) return std::nullopt;
    return static_cast<int>(*v);
}

// Non-negative decimal integer of arbitrary size.
std::optional<BigUint> parse_wei(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
    }
    BigUint value = 0;
    for (char c : text) {
        value *= 10;
        value += c - '0';
    }
    return value;
}

template <typename Record>
std::vector<Record> strict(LoadResult<Record> result, const char* what) {
    if (!result.ok()) {
        std::string msg = std::string(what) + ": " + std::to_string(result.diagnostics.size()) + " malformed row(s);";
        size_t shown = std::min<size_t>(result.diagnostics.size(), 5);
        for (size_t i = 0; i < shown; ++i) {
            msg += " [line " + std::to_string(result.diagnostics[i].line) + "] " + result.diagnostics[i].message + ";";
        }
        raise(ErrorKind::Parse, msg);
    }
    return std::move(result.records);
}

}  // namespace

std::vector<uint8_t> ContractRecord::bytecode() const {
    auto bytes = decode_hex(bytecode_hex);
    if (!bytes) raise(ErrorKind::Internal, "contract " + account + ": stored bytecode is not canonical hex");
    return std::move(*bytes);
}

LoadResult<ContractRecord> load_contracts(const std::string& path) {
    CsvReader reader(path);
    require_header(reader, {"account", "bytecode", "label"});
    LoadResult<ContractRecord> result;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        const size_t line = reader.line_number();
        if (fields.size() != 3) {
            result.diagnostics.push_back({line, "expected 3 fields, got " + std::to_string(fields.size())});
            continue;
        }
        auto account = normalize_account(fields[0]);
        if (!account) {
            result.diagnostics.push_back({line, "invalid account '" + fields[0] + "'"});
            continue;
        }
        auto bytecode = normalize_bytecode(fields[1]);
        if (!bytecode) {
            result.diagnostics.push_back({line, "invalid bytecode hex for account " + *account});
            continue;
        }
        auto label = parse_label(fields[2]);
        if (!label) {
            result.diagnostics.push_back({line, "invalid label at line " + std::to_string(line) +
                                                    ": '" + fields[2] + "' (must be 1, 0 or -1)"});
            continue;
        }
        result.records.push_back({std::move(*account), std::move(*bytecode), *label});
    }
    return result;
}

LoadResult<AddressRecord> load_addresses(const std::string& path) {
    CsvReader reader(path);
    require_header(reader, {"account", "label"});
    LoadResult<AddressRecord> result;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        const size_t line = reader.line_number();
        if (fields.size() != 2) {
            result.diagnostics.push_back({line, "expected 2 fields, got " + std::to_string(fields.size())});
            continue;
        }
        auto account = normalize_account(fields[0]);
        if (!account) {
            result.diagnostics.push_back({line, "invalid account '" + fields[0] + "'"});
            continue;
        }
        auto label = parse_label(fields[1]);
        if (!label) {
            result.diagnostics.push_back({line, "invalid label at line " + std::to_string(line) +
                                                    ": '" + fields[1] + "' (must be 1, 0 or -1)"});
            continue;
        }
        result.records.push_back({std::move(*account), *label});
    }
    return result;
}

LoadResult<TransactionRecord> load_transactions(const std::string& path) {
    CsvReader reader(path);
    require_header(reader, {"tx_id", "from", "to", "value_wei"});
    LoadResult<TransactionRecord> result;
    std::vector<std::string> fields;
    std::unordered_map<std::string, size_t> seen;  // tx_id -> first line
    std::set<std::string> duplicates;
    while (reader.next(fields)) {
        const size_t line = reader.line_number();
        if (fields.size() != 4) {
            result.diagnostics.push_back({line, "expected 4 fields, got " + std::to_string(fields.size())});
            continue;
        }
        if (trim(fields[0]).empty()) {
            result.diagnostics.push_back({line, "empty tx_id"});
            continue;
        }
        if (trim(fields[1]).empty() || trim(fields[2]).empty()) {
            result.diagnostics.push_back({line, "empty from/to address"});
            continue;
        }
        auto value = parse_wei(fields[3]);
        if (!value) {
            result.diagnostics.push_back({line, "invalid value_wei '" + fields[3] + "' (non-negative integer required)"});
            continue;
        }
        auto [it, inserted] = seen.emplace(fields[0], line);
        if (!inserted) {
            duplicates.insert(fields[0]);
            continue;
        }
        result.records.push_back({fields[0], fields[1], fields[2], std::move(*value)});
    }
    if (!duplicates.empty()) {
        std::string msg = path + ": duplicate tx_id(s):";
        size_t shown = 0;
        for (const auto& id : duplicates) {
            if (shown++ == 10) {
                msg += " ... (" + std::to_string(duplicates.size()) + " total)";
                break;
            }
            msg += " " + id;
        }
        raise(ErrorKind::Parse, msg);
    }
    return result;
}

std::vector<ContractRecord> load_contracts_strict(const std::string& path) {
    return strict(load_contracts(path), path.c_str());
}
std::vector<AddressRecord> load_addresses_strict(const std::string& path) {
    return strict(load_addresses(path), path.c_str());
}
std::vector<TransactionRecord> load_transactions_strict(const std::string& path) {
    return strict(load_transactions(path), path.c_str());
}

void write_contracts(const std::vector<ContractRecord>& records, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"account", "bytecode", "label"});
    for (const auto& r : records) {
        out.write_row({r.account, r.bytecode_hex, std::to_string(r.label)});
    }
    out.close();
}

void write_addresses(const std::vector<AddressRecord>& records, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"account", "label"});
    for (const auto& r : records) {
        out.write_row({r.account, std::to_string(r.label)});
    }
    out.close();
}

void write_transactions(const std::vector<TransactionRecord>& records, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"tx_id", "from", "to", "value_wei"});
    for (const auto& r : records) {
        out.write_row({r.tx_id, r.from, r.to, r.value_wei.str()});
    }
    out.close();
}

LabeledDataset::LabeledDataset(std::vector<std::string> feature_names)
    : feature_names_(std::move(feature_names)) {}

void LabeledDataset::add_row(std::string id, std::vector<double> features, int label) {
    if (features.size() != feature_names_.size()) {
        raise(ErrorKind::Internal, "row '" + id + "': " + std::to_string(features.size()) +
                                       " features, schema has " + std::to_string(feature_names_.size()));
    }
    ids_.push_back(std::move(id));
    values_.insert(values_.end(), features.begin(), features.end());
    labels_.push_back(label);
}

std::string LabeledDataset::schema_digest() const { return digest_names(feature_names_); }

std::vector<size_t> LabeledDataset::labeled_rows() const {
    std::vector<size_t> rows;
    for (size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != kLabelUnlabeled) rows.push_back(i);
    }
    return rows;
}

LabeledDataset LabeledDataset::subset(const std::vector<size_t>& rows) const {
    LabeledDataset out(feature_names_);
    for (size_t r : rows) {
        out.add_row(ids_[r], std::vector<double>(row(r), row(r) + num_features()), labels_[r]);
    }
    return out;
}

std::string schema_sidecar_path(const std::string& csv_path) {
    const std::string suffix = ".features.csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".schema";
    }
    return csv_path + ".schema";
}

void write_dataset(const LabeledDataset& ds, const std::string& csv_path) {
    {
        CsvWriter out(csv_path);
        std::vector<std::string> row;
        row.reserve(ds.num_features() + 2);
        row.push_back("account");
        row.push_back("label");
        for (const auto& name : ds.feature_names()) row.push_back(name);
        out.write_row(row);
        for (size_t i = 0; i < ds.num_rows(); ++i) {
            row.clear();
            row.push_back(ds.id(i));
            row.push_back(std::to_string(ds.label(i)));
            for (size_t j = 0; j < ds.num_features(); ++j) row.push_back(format_double(ds.at(i, j)));
            out.write_row(row);
        }
        out.close();
    }
    std::string sidecar = "digest " + ds.schema_digest() + "\n";
    for (const auto& name : ds.feature_names()) sidecar += name + "\n";
    write_text_file(schema_sidecar_path(csv_path), sidecar);
}

LabeledDataset read_dataset(const std::string& csv_path) {
    CsvReader reader(csv_path);
    const auto& header = reader.header();
    if (header.size() < 2 || header[0] != "account" || header[1] != "label") {
        raise(ErrorKind::Parse, csv_path + ": expected header starting with 'account,label'");
    }
    std::vector<std::string> names(header.begin() + 2, header.end());
    LabeledDataset ds(names);

    std::vector<std::string> fields;
    std::unordered_set<std::string> seen_ids;
    while (reader.next(fields)) {
        const size_t line = reader.line_number();
        if (fields.size() != header.size()) {
            raise(ErrorKind::Parse, csv_path + ":" + std::to_string(line) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
        }
        auto label = parse_label(fields[1]);
        if (!label) {
            raise(ErrorKind::Parse, csv_path + ":" + std::to_string(line) + ": invalid label '" + fields[1] + "'");
        }
        if (!seen_ids.insert(fields[0]).second) {
            raise(ErrorKind::Parse, csv_path + ":" + std::to_string(line) + ": duplicate entity id '" + fields[0] + "'");
        }
        std::vector<double> row(names.size());
        for (size_t j = 0; j < names.size(); ++j) {
            auto v = parse_double(fields[2 + j]);
            if (!v) {
                raise(ErrorKind::Parse, csv_path + ":" + std::to_string(line) + ": invalid number '" + fields[2 + j] +
                                            "' in column " + names[j]);
            }
            row[j] = *v;
        }
        ds.add_row(fields[0], std::move(row), *label);
    }

    // When a sidecar exists, it must agree with the CSV header.
    const std::string sidecar = schema_sidecar_path(csv_path);
    std::ifstream probe(sidecar);
    if (probe) {
        std::string content((std::istreambuf_iterator<char>(probe)), std::istreambuf_iterator<char>());
        std::istringstream in(content);
        std::string first;
        std::getline(in, first);
        std::string expect = "digest " + ds.schema_digest();
        if (trim(first) != expect) {
            raise(ErrorKind::Schema, sidecar + ": digest does not match feature columns of " + csv_path);
        }
    }
    return ds;
}

}  // namespace betscan
