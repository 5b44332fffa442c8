#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace betscan {

// Contract for an etherscan-style remote data source: given an account,
// return its bytecode or a page of its transactions. Offline CSV files are
// the canonical data path; this interface exists so a live client can be
// dropped in without touching the pipeline.
class FetchClient {
public:
    virtual ~FetchClient() = default;

    // Runtime bytecode for the account, or nullopt when unknown.
    virtual std::optional<std::string> fetch_bytecode(const std::string& account) = 0;

    // Transactions touching the account, paged; an empty page means past
    // the end.
    virtual std::vector<TransactionRecord> fetch_transactions(const std::string& account,
                                                              size_t page, size_t page_size) = 0;
};

// File-backed implementation reading the canonical CSV datasets.
class FileFetchClient : public FetchClient {
public:
    FileFetchClient(const std::string& contracts_csv, const std::string& transactions_csv);

    std::optional<std::string> fetch_bytecode(const std::string& account) override;
    std::vector<TransactionRecord> fetch_transactions(const std::string& account,
                                                      size_t page, size_t page_size) override;

private:
    std::vector<ContractRecord> contracts_;
    std::vector<TransactionRecord> transactions_;
};

}  // namespace betscan
