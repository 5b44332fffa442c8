#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "core/error.hpp"
#include "core/hex.hpp"
#include "core/opcode_features.hpp"
#include "core/util.hpp"
#include "support/temp_dir.hpp"

using namespace betscan;

TEST_CASE("default schema drops the wide-register ranges and keeps 84 mnemonics") {
    const auto schema = FeatureSchema::default_schema();
    CHECK(schema.size() == 84);  // 136 - 28 PUSH - 12 DUP - 12 SWAP
    CHECK(std::is_sorted(schema.mnemonics.begin(), schema.mnemonics.end()));

    auto has = [&](const std::string& m) {
        return std::find(schema.mnemonics.begin(), schema.mnemonics.end(), m) != schema.mnemonics.end();
    };
    CHECK_FALSE(has("PUSH7"));
    CHECK_FALSE(has("PUSH5"));
    CHECK_FALSE(has("PUSH32"));
    CHECK_FALSE(has("DUP5"));
    CHECK_FALSE(has("DUP16"));
    CHECK_FALSE(has("SWAP5"));
    CHECK_FALSE(has("SWAP16"));
    CHECK(has("PUSH4"));
    CHECK(has("DUP4"));
    CHECK(has("SWAP4"));
    CHECK(has("CALLDATACOPY"));
    CHECK(has("EXP"));
    CHECK(has("BALANCE"));
    CHECK_FALSE(has("INVALID"));
    CHECK_FALSE(schema.digest.empty());
}

TEST_CASE("featurize counts exact occurrences") {
    const auto schema = FeatureSchema::default_schema();
    // ADD ADD STOP
    const auto stream = disassemble(decode_hex("0x010100").value());
    const auto counts = featurize(stream, schema);
    REQUIRE(counts.size() == schema.size());
    uint64_t total = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        total += counts[i];
        if (schema.mnemonics[i] == "ADD") CHECK(counts[i] == 2);
        else if (schema.mnemonics[i] == "STOP") CHECK(counts[i] == 1);
        else CHECK(counts[i] == 0);
    }
    CHECK(total == 3);
}

TEST_CASE("empty stream gives the all-zero vector") {
    const auto schema = FeatureSchema::default_schema();
    const auto counts = featurize(disassemble(std::vector<uint8_t>{}), schema);
    CHECK(std::all_of(counts.begin(), counts.end(), [](uint64_t c) { return c == 0; }));
}

TEST_CASE("non-retained mnemonics are not counted") {
    const auto schema = FeatureSchema::default_schema();
    // PUSH7 (0x66) with 7 operand bytes, then ADD.
    const auto stream = disassemble(decode_hex("0x660000000000000001").value());
    const auto counts = featurize(stream, schema);
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    CHECK(total == 1);  // only the ADD

    // Sum bound: retained counts never exceed the instruction count.
    CHECK(total <= stream.instructions.size());
}

TEST_CASE("counts are order-insensitive") {
    const auto schema = FeatureSchema::default_schema();
    const auto a = featurize(disassemble(decode_hex("0x0102600157").value()), schema);
    const auto b = featurize(disassemble(decode_hex("0x5702600101").value()), schema);
    // Same multiset of opcodes in different order; PUSH1 operands differ in
    // position but not in count.
    CHECK(a == b);
}

TEST_CASE("schema file round-trip and validation") {
    test::TempDir dir("schema");
    const auto path = dir.file("schema.txt");
    const auto schema = FeatureSchema::default_schema();
    schema.save(path);
    const auto back = FeatureSchema::load(path);
    CHECK(back.mnemonics == schema.mnemonics);
    CHECK(back.digest == schema.digest);

    std::ofstream(path) << "ADD\nNOSUCHOP\n";
    CHECK_THROWS_AS(FeatureSchema::load(path), Error);
    std::ofstream(path) << "ADD\nADD\n";
    CHECK_THROWS_AS(FeatureSchema::load(path), Error);
}

TEST_CASE("featurize_contracts builds a labeled table keyed by account") {
    std::vector<ContractRecord> contracts = {
        {"0x" + std::string(40, '1'), "0x0101", 1},
        {"0x" + std::string(40, '2'), "0x", 0},
        {"0x" + std::string(40, '3'), "0x00", -1},
    };
    const auto ds = featurize_contracts(contracts, FeatureSchema::default_schema());
    CHECK(ds.num_rows() == 3);
    CHECK(ds.num_features() == 84);
    CHECK(ds.label(2) == -1);
    CHECK(ds.id(0) == contracts[0].account);
    CHECK(ds.schema_digest() == FeatureSchema::default_schema().digest);
}
