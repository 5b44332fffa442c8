#include "core/fetch.hpp"

namespace betscan {

FileFetchClient::FileFetchClient(const std::string& contracts_csv, const std::string& transactions_csv)
    : contracts_(load_contracts_strict(contracts_csv)),
      transactions_(load_transactions_strict(transactions_csv)) {}

std::optional<std::string> FileFetchClient::fetch_bytecode(const std::string& account) {
    for (const auto& c : contracts_) {
        if (c.account == account) return c.bytecode_hex;
    }
    return std::nullopt;
}

std::vector<TransactionRecord> FileFetchClient::fetch_transactions(const std::string& account,
                                                                   size_t page, size_t page_size) {
    std::vector<TransactionRecord> matching;
    for (const auto& tx : transactions_) {
        if (tx.from == account || tx.to == account) matching.push_back(tx);
    }
    std::vector<TransactionRecord> out;
    const size_t begin = page * page_size;
    for (size_t i = begin; i < matching.size() && i < begin + page_size; ++i) {
        out.push_back(matching[i]);
    }
    return out;
}

}  // namespace betscan
