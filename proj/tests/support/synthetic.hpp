#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace betscan::test {

// Deterministic synthetic corpus shaped like the production datasets:
// labeled + unlabeled contracts with solc-idiom bytecode, labeled +
// unlabeled addresses, and the transaction set tying them together.
// Gambling contracts lean on randomness/funds opcodes; gambling addresses
// repeatedly pay similar amounts into few contracts.
struct CorpusSpec {
    size_t gambling_contracts = 26;
    size_t normal_contracts = 104;
    size_t unlabeled_contracts = 50;
    size_t gambling_addresses = 300;
    size_t normal_addresses = 1200;
    size_t unlabeled_addresses = 200;
    uint64_t seed = 2024;

    // Fraction of normal contracts whose bytecode mimics gambling idioms
    // (the false-positive bait the correction stage exists for).
    double hard_negative_rate = 0.10;

    static CorpusSpec paper_scale();  // Table-like full-size corpus
    static CorpusSpec small();        // quick integration-test corpus
};

struct Corpus {
    std::vector<ContractRecord> contracts;
    std::vector<AddressRecord> addresses;
    std::vector<TransactionRecord> transactions;

    void write(const std::string& dir) const;  // contracts/addresses/transactions CSVs
};

Corpus generate_corpus(const CorpusSpec& spec);

// Standalone bytecode generator: dispatcher prologue, body with the given
// opcode profile, CBOR-style metadata trailer.
std::vector<uint8_t> synthetic_bytecode(uint64_t seed, bool gambling_profile, size_t body_ops);

// Imbalanced overlapping two-class set for classifier benchmarks
// (~positive_rate positives). Returns ids r0..r{n-1}.
LabeledDataset synthetic_classification_set(size_t rows, size_t features, double positive_rate,
                                            double class_separation, uint64_t seed);

}  // namespace betscan::test
