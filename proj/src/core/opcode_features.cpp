#include "core/opcode_features.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "core/error.hpp"
#include "core/util.hpp"

namespace betscan {

namespace {

bool in_discarded_range(const std::string& m) {
    auto suffix_in = [&](std::string_view prefix, int lo, int hi) {
        if (m.size() <= prefix.size() || m.compare(0, prefix.size(), prefix) != 0) return false;
        auto n = parse_int(m.substr(prefix.size()));
        return n && *n >= lo && *n <= hi;
    };
    return suffix_in("PUSH", 5, 32) || suffix_in("DUP", 5, 16) || suffix_in("SWAP", 5, 16);
}

}  // namespace

FeatureSchema FeatureSchema::default_schema(const OpcodeTable& table) {
    std::vector<std::string> retained;
    for (const auto& m : table.mnemonics()) {
        if (!in_discarded_range(m)) retained.push_back(m);
    }
    std::sort(retained.begin(), retained.end());
    return from_mnemonics(std::move(retained), table);
}

FeatureSchema FeatureSchema::from_mnemonics(std::vector<std::string> mnemonics, const OpcodeTable& table) {
    std::set<std::string> seen;
    for (const auto& m : mnemonics) {
        if (!seen.insert(m).second) raise(ErrorKind::Schema, "duplicate mnemonic in schema: " + m);
        if (!table.has_mnemonic(m)) raise(ErrorKind::Schema, "mnemonic not in opcode table: " + m);
    }
    FeatureSchema schema;
    schema.mnemonics = std::move(mnemonics);
    schema.digest = digest_names(schema.mnemonics);
    return schema;
}

FeatureSchema FeatureSchema::load(const std::string& path, const OpcodeTable& table) {
    std::istringstream in(read_text_file(path));
    std::vector<std::string> mnemonics;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        mnemonics.emplace_back(s);
    }
    return from_mnemonics(std::move(mnemonics), table);
}

void FeatureSchema::save(const std::string& path) const {
    std::string out;
    for (const auto& m : mnemonics) out += m + "\n";
    write_text_file(path, out);
}

std::vector<uint64_t> featurize(const InstructionStream& stream, const FeatureSchema& schema) {
    std::unordered_map<std::string_view, size_t> index;
    index.reserve(schema.mnemonics.size());
    for (size_t i = 0; i < schema.mnemonics.size(); ++i) index.emplace(schema.mnemonics[i], i);

    std::vector<uint64_t> counts(schema.size(), 0);
    for (const auto& ins : stream.instructions) {
        if (ins.invalid_opcode) continue;
        auto it = index.find(ins.mnemonic);
        if (it != index.end()) ++counts[it->second];
    }
    return counts;
}

LabeledDataset featurize_contracts(const std::vector<ContractRecord>& contracts,
                                   const FeatureSchema& schema, const OpcodeTable& table) {
    LabeledDataset ds(schema.mnemonics);
    for (const auto& contract : contracts) {
        const auto stream = disassemble(contract.bytecode(), table);
        const auto counts = featurize(stream, schema);
        std::vector<double> row(counts.begin(), counts.end());
        ds.add_row(contract.account, std::move(row), contract.label);
    }
    return ds;
}

}  // namespace betscan
