#include "core/correction.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/util.hpp"

namespace betscan {

void PredictionSet::add(const std::string& account, int predicted) {
    if (by_account.emplace(account, predicted).second) accounts.push_back(account);
}

PredictionSet read_predictions(const std::string& path) {
    CsvReader reader(path);
    const int account_col = reader.column("account");
    const int pred_col = reader.column("predicted");
    if (account_col < 0 || pred_col < 0) {
        raise(ErrorKind::Parse, path + ": expected columns 'account' and 'predicted'");
    }
    PredictionSet set;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        auto v = parse_int(fields[pred_col]);
        if (!v || (*v != 0 && *v != 1)) {
            raise(ErrorKind::Parse, path + ":" + std::to_string(reader.line_number()) +
                                        ": invalid predicted value '" + fields[pred_col] + "'");
        }
        set.add(fields[account_col], static_cast<int>(*v));
    }
    return set;
}

void write_predictions(const std::string& path, const std::vector<std::string>& accounts,
                       const std::vector<double>& probas, double threshold) {
    CsvWriter out(path);
    out.write_row({"account", "proba", "predicted"});
    for (size_t i = 0; i < accounts.size(); ++i) {
        out.write_row({accounts[i], format_double(probas[i]), probas[i] >= threshold ? "1" : "0"});
    }
    out.close();
}

const std::vector<std::string>& AssociationIndex::addresses_of(const std::string& contract) const {
    auto it = assoc_.find(contract);
    return it == assoc_.end() ? empty_ : it->second;
}

void AssociationIndex::associate(const std::string& contract, const std::string& address) {
    if (contract == address) return;
    if (seen_[contract].insert(address).second) assoc_[contract].push_back(address);
}

AssociationIndex build_association(const std::vector<TransactionRecord>& txs,
                                   const std::unordered_set<std::string>& contracts,
                                   const std::unordered_set<std::string>& addresses) {
    AssociationIndex index;
    for (const auto& tx : txs) {
        if (contracts.count(tx.to) && addresses.count(tx.from)) index.associate(tx.to, tx.from);
        if (contracts.count(tx.from) && addresses.count(tx.to)) index.associate(tx.from, tx.to);
    }
    return index;
}

std::unordered_map<std::string, int> CorrectionReport::posterior_predictions() const {
    std::unordered_map<std::string, int> out;
    for (const auto& row : rows) out.emplace(row.contract, row.posterior);
    return out;
}

void CorrectionReport::write(const std::string& path) const {
    CsvWriter out(path);
    out.write_row({"account", "prior", "gambling_address_fraction", "posterior", "flipped"});
    for (const auto& row : rows) {
        out.write_row({row.contract, std::to_string(row.prior),
                       row.has_fraction ? format_double(row.fraction) : "",
                       std::to_string(row.posterior), row.flipped ? "1" : "0"});
    }
    out.close();
}

CorrectionReport apply_correction(const PredictionSet& contract_preds,
                                  const PredictionSet& address_preds,
                                  const AssociationIndex& index, double threshold) {
    CorrectionReport report;
    report.threshold = threshold;
    report.rows.reserve(contract_preds.size());
    for (const auto& contract : contract_preds.accounts) {
        CorrectionRow row;
        row.contract = contract;
        row.prior = contract_preds.at(contract);
        row.posterior = row.prior;

        if (row.prior == 1) {
            // Addresses without their own prediction are omitted from both
            // numerator and denominator.
            size_t predicted = 0, gambling = 0;
            for (const auto& address : index.addresses_of(contract)) {
                if (!address_preds.has(address)) continue;
                ++predicted;
                gambling += address_preds.at(address);
            }
            if (predicted > 0) {
                row.has_fraction = true;
                row.fraction = static_cast<double>(gambling) / static_cast<double>(predicted);
                if (row.fraction < threshold) {
                    row.posterior = 0;
                    row.flipped = true;
                }
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace betscan
