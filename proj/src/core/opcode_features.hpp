#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/disasm.hpp"

namespace betscan {

// Ordered list of retained mnemonics; the order defines feature columns.
struct FeatureSchema {
    std::vector<std::string> mnemonics;
    std::string digest;

    // All named table operations minus the rarely-used wide-register ranges
    // PUSH5-PUSH32, DUP5-DUP16 and SWAP5-SWAP16; alphabetical order.
    static FeatureSchema default_schema(const OpcodeTable& table = OpcodeTable::evm_default());

    // Validates against the table: no duplicates, every mnemonic known.
    static FeatureSchema from_mnemonics(std::vector<std::string> mnemonics,
                                        const OpcodeTable& table = OpcodeTable::evm_default());

    // One mnemonic per line; '#' comments and blank lines ignored.
    static FeatureSchema load(const std::string& path,
                              const OpcodeTable& table = OpcodeTable::evm_default());
    void save(const std::string& path) const;

    size_t size() const { return mnemonics.size(); }
};

// Exact occurrence count of each retained mnemonic in the stream. INVALID
// and non-retained mnemonics contribute nothing.
std::vector<uint64_t> featurize(const InstructionStream& stream, const FeatureSchema& schema);

// Disassembles and featurizes a whole contract dataset; labels carried over.
LabeledDataset featurize_contracts(const std::vector<ContractRecord>& contracts,
                                   const FeatureSchema& schema,
                                   const OpcodeTable& table = OpcodeTable::evm_default());

}  // namespace betscan
