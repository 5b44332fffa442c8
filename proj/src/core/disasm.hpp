#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace betscan {

// The instruction table ships as data (see opcode_entries in disasm.cpp and
// data/opcode_table.tsv) so that later fork additions do not require code
// changes. Byte values outside the table decode as INVALID.
class OpcodeTable {
public:
    struct Entry {
        std::string mnemonic = "INVALID";
        uint8_t operand_len = 0;
        bool assigned = false;
    };

    // Built-in default table: 136 named operations.
    static const OpcodeTable& evm_default();

    // TSV rows `0xNN<TAB>MNEMONIC<TAB>operand_len`; '#' comments allowed.
    static OpcodeTable from_file(const std::string& path);

    const Entry& entry(uint8_t opcode) const { return entries_[opcode]; }
    const std::array<Entry, 256>& entries() const { return entries_; }

    // Number of named (assigned) mnemonics.
    size_t named_count() const;

    // Sorted unique named mnemonics.
    std::vector<std::string> mnemonics() const;
    bool has_mnemonic(const std::string& mnemonic) const;

private:
    std::array<Entry, 256> entries_;
};

struct Instruction {
    uint32_t offset = 0;          // byte index into the code
    uint8_t opcode = 0;
    std::string mnemonic;
    std::vector<uint8_t> operand;  // zero-padded to the PUSH width when truncated
    uint8_t operand_consumed = 0;  // operand bytes actually present in the code
    bool invalid_opcode = false;
    bool truncated_push = false;
};

struct InstructionStream {
    std::vector<Instruction> instructions;
    size_t source_length = 0;
};

// Linear single-pass decode; total over every byte sequence. Unknown bytes
// become INVALID instructions, and a PUSH cut off by the end of code keeps
// its mnemonic with the operand zero-padded and the truncated_push flag set.
InstructionStream disassemble(std::span<const uint8_t> code,
                              const OpcodeTable& table = OpcodeTable::evm_default());

// One instruction per line: `offset mnemonic [operand-hex]`.
std::string format_listing(const InstructionStream& stream);

}  // namespace betscan
