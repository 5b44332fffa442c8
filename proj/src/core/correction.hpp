#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "core/dataset.hpp"

namespace betscan {

// Binary predictions keyed by account, in a stable (input) order.
struct PredictionSet {
    std::vector<std::string> accounts;
    std::unordered_map<std::string, int> by_account;  // account -> 0/1

    void add(const std::string& account, int predicted);
    bool has(const std::string& account) const { return by_account.count(account) > 0; }
    int at(const std::string& account) const { return by_account.at(account); }
    size_t size() const { return accounts.size(); }
};

// predictions CSV: account,proba,predicted (proba optional on read).
PredictionSet read_predictions(const std::string& path);
void write_predictions(const std::string& path, const std::vector<std::string>& accounts,
                       const std::vector<double>& probas, double threshold);

// contract account -> addresses with at least one transaction with it.
// A contract never appears in its own address set.
class AssociationIndex {
public:
    const std::vector<std::string>& addresses_of(const std::string& contract) const;
    void associate(const std::string& contract, const std::string& address);

private:
    std::unordered_map<std::string, std::vector<std::string>> assoc_;
    std::unordered_map<std::string, std::unordered_set<std::string>> seen_;
    std::vector<std::string> empty_;
};

AssociationIndex build_association(const std::vector<TransactionRecord>& txs,
                                   const std::unordered_set<std::string>& contracts,
                                   const std::unordered_set<std::string>& addresses);

struct CorrectionRow {
    std::string contract;
    int prior = 0;
    bool has_fraction = false;
    double fraction = 0.0;  // gambling-predicted associated addresses / predicted ones
    int posterior = 0;
    bool flipped = false;
};

struct CorrectionReport {
    double threshold = 0.8;
    std::vector<CorrectionRow> rows;

    std::unordered_map<std::string, int> posterior_predictions() const;
    void write(const std::string& path) const;
};

// Flips a gambling-predicted contract to non-gambling when strictly less
// than `threshold` of its predicted associated addresses are gambling-
// predicted. Contracts without any predicted associated address are left
// unchanged; flips are one-directional.
CorrectionReport apply_correction(const PredictionSet& contract_preds,
                                  const PredictionSet& address_preds,
                                  const AssociationIndex& index, double threshold = 0.8);

}  // namespace betscan
