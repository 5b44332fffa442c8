#include <doctest.h>

#include <fstream>
#include <map>

#include "core/disasm.hpp"
#include "core/hex.hpp"
#include "core/util.hpp"
#include "support/temp_dir.hpp"

using namespace betscan;

namespace {

// Independent reference decoder used to cross-check the production table:
// built from first principles (PUSHn = 0x60 + n - 1 carrying n operand
// bytes) plus the documented one-byte opcodes below. Kept separate from
// the implementation on purpose.
struct RefInstruction {
    size_t offset;
    std::string mnemonic;
    std::vector<uint8_t> operand;
};

std::vector<RefInstruction> reference_decode(const std::vector<uint8_t>& code) {
    static const std::map<uint8_t, std::string> simple = {
        {0x00, "STOP"},        {0x01, "ADD"},          {0x02, "MUL"},      {0x03, "SUB"},
        {0x10, "LT"},          {0x11, "GT"},           {0x14, "EQ"},       {0x15, "ISZERO"},
        {0x34, "CALLVALUE"},   {0x35, "CALLDATALOAD"}, {0x36, "CALLDATASIZE"},
        {0x50, "POP"},         {0x52, "MSTORE"},       {0x54, "SLOAD"},
    };
    std::vector<RefInstruction> out;
    size_t pos = 0;
    while (pos < code.size()) {
        const uint8_t op = code[pos];
        RefInstruction ins{pos, "?", {}};
        if (op >= 0x60 && op <= 0x7f) {
            const size_t n = op - 0x60 + 1;
            ins.mnemonic = "PUSH" + std::to_string(n);
            const size_t have = std::min(n, code.size() - pos - 1);
            ins.operand.assign(code.begin() + pos + 1, code.begin() + pos + 1 + have);
            pos += 1 + have;
        } else {
            auto it = simple.find(op);
            if (it != simple.end()) ins.mnemonic = it->second;
            pos += 1;
        }
        out.push_back(std::move(ins));
    }
    return out;
}

}  // namespace

TEST_CASE("opcode table covers all 256 bytes with 136 named operations") {
    const auto& table = OpcodeTable::evm_default();
    CHECK(table.named_count() == 136);
    CHECK(table.mnemonics().size() == 136);  // names are unique
    for (int b = 0; b < 256; ++b) {
        const auto& e = table.entry(static_cast<uint8_t>(b));
        if (!e.assigned) {
            CHECK(e.mnemonic == "INVALID");
            CHECK(e.operand_len == 0);
        }
    }
    // Operand lengths: PUSHn carries n bytes, nothing else carries any.
    for (int n = 1; n <= 32; ++n) {
        CHECK(table.entry(static_cast<uint8_t>(0x60 + n - 1)).mnemonic == "PUSH" + std::to_string(n));
        CHECK(table.entry(static_cast<uint8_t>(0x60 + n - 1)).operand_len == n);
    }
}

TEST_CASE("documented opcode golden values") {
    const auto& table = OpcodeTable::evm_default();
    const std::vector<std::pair<uint8_t, std::string>> golden = {
        {0x00, "STOP"},      {0x01, "ADD"},          {0x02, "MUL"},
        {0x03, "SUB"},       {0x10, "LT"},           {0x11, "GT"},
        {0x14, "EQ"},        {0x15, "ISZERO"},       {0x34, "CALLVALUE"},
        {0x35, "CALLDATALOAD"}, {0x36, "CALLDATASIZE"}, {0x50, "POP"},
        {0x52, "MSTORE"},    {0x54, "SLOAD"},
    };
    for (const auto& [opcode, mnemonic] : golden) {
        CHECK(table.entry(opcode).mnemonic == mnemonic);
        CHECK(table.entry(opcode).operand_len == 0);
    }
    CHECK(table.entry(0xfe).mnemonic == "INVALID");  // designated invalid byte is unassigned
}

TEST_CASE("disassemble basic programs") {
    const auto stream = disassemble(decode_hex("0x00").value());
    REQUIRE(stream.instructions.size() == 1);
    CHECK(stream.instructions[0].mnemonic == "STOP");
    CHECK(stream.instructions[0].offset == 0);

    const auto push_add = disassemble(decode_hex("0x6001600201").value());
    REQUIRE(push_add.instructions.size() == 3);
    CHECK(push_add.instructions[0].mnemonic == "PUSH1");
    CHECK(push_add.instructions[0].operand == std::vector<uint8_t>{0x01});
    CHECK(push_add.instructions[1].mnemonic == "PUSH1");
    CHECK(push_add.instructions[1].operand == std::vector<uint8_t>{0x02});
    CHECK(push_add.instructions[2].mnemonic == "ADD");
    CHECK(push_add.instructions[2].offset == 4);
}

TEST_CASE("disassembly agrees with the independent reference decoder") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<uint8_t> code(rng.uniform_index(400));
        for (auto& b : code) b = static_cast<uint8_t>(rng.uniform_index(256));
        const auto ours = disassemble(code);
        const auto ref = reference_decode(code);
        REQUIRE(ours.instructions.size() == ref.size());
        for (size_t i = 0; i < ref.size(); ++i) {
            CHECK(ours.instructions[i].offset == ref[i].offset);
            if (ref[i].mnemonic != "?") {
                CHECK(ours.instructions[i].mnemonic == ref[i].mnemonic);
            }
            // Operand bytes actually present in the code agree.
            REQUIRE(ours.instructions[i].operand_consumed == ref[i].operand.size());
            for (size_t j = 0; j < ref[i].operand.size(); ++j) {
                CHECK(ours.instructions[i].operand[j] == ref[i].operand[j]);
            }
        }
    }
}

TEST_CASE("truncated PUSH is zero-padded, flagged, and keeps its mnemonic") {
    const auto stream = disassemble(decode_hex("0x60").value());
    REQUIRE(stream.instructions.size() == 1);
    const auto& ins = stream.instructions[0];
    CHECK(ins.mnemonic == "PUSH1");
    CHECK(ins.truncated_push);
    CHECK(ins.operand == std::vector<uint8_t>{0x00});
    CHECK(ins.operand_consumed == 0);

    const auto longer = disassemble(decode_hex("0x7f0102").value());  // PUSH32 with 2 bytes left
    REQUIRE(longer.instructions.size() == 1);
    CHECK(longer.instructions[0].operand.size() == 32);
    CHECK(longer.instructions[0].operand_consumed == 2);
    CHECK(longer.instructions[0].truncated_push);
}

TEST_CASE("coverage invariant holds for random byte soup") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> code(rng.uniform_index(600));
        for (auto& b : code) b = static_cast<uint8_t>(rng.uniform_index(256));
        const auto stream = disassemble(code);
        CHECK(stream.source_length == code.size());
        size_t consumed = 0;
        uint32_t last_offset = 0;
        bool first = true;
        for (const auto& ins : stream.instructions) {
            if (!first) CHECK(ins.offset > last_offset);  // strictly increasing
            first = false;
            last_offset = ins.offset;
            consumed += 1 + ins.operand_consumed;
        }
        CHECK(consumed == code.size());
        // Determinism: decoding twice gives the identical stream.
        const auto again = disassemble(code);
        REQUIRE(again.instructions.size() == stream.instructions.size());
        for (size_t i = 0; i < stream.instructions.size(); ++i) {
            CHECK(again.instructions[i].mnemonic == stream.instructions[i].mnemonic);
            CHECK(again.instructions[i].offset == stream.instructions[i].offset);
        }
    }
}

TEST_CASE("unknown bytes decode as INVALID without aborting") {
    const auto stream = disassemble(decode_hex("0xfe0c21").value());
    REQUIRE(stream.instructions.size() == 3);
    for (const auto& ins : stream.instructions) {
        CHECK(ins.mnemonic == "INVALID");
        CHECK(ins.invalid_opcode);
    }
}

TEST_CASE("listing format: offset mnemonic operand-hex") {
    const auto stream = disassemble(decode_hex("0x6001600201").value());
    CHECK(format_listing(stream) == "0 PUSH1 0x01\n2 PUSH1 0x02\n4 ADD\n");
}

TEST_CASE("opcode table loads from a TSV data file") {
    test::TempDir dir("optable");
    const auto path = dir.file("table.tsv");
    std::ofstream(path) << "# comment\n0x00\tSTOP\t0\n0x60\tPUSH1\t1\n";
    const auto table = OpcodeTable::from_file(path);
    CHECK(table.named_count() == 2);
    CHECK(table.entry(0x00).mnemonic == "STOP");
    CHECK(table.entry(0x60).operand_len == 1);
    CHECK_FALSE(table.entry(0x01).assigned);
}
