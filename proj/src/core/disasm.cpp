#include "core/disasm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/hex.hpp"
#include "core/util.hpp"

namespace betscan {

namespace {

struct OpcodeRow {
    uint8_t opcode;
    const char* mnemonic;
    uint8_t operand_len;
};

// 136 named operations. PUSH1..PUSH32 carry 1..32 inline operand bytes;
// everything else has none. Byte values not listed here decode as INVALID.
constexpr OpcodeRow opcode_rows[] = {
    {0x00, "STOP", 0},
    {0x01, "ADD", 0},
    {0x02, "MUL", 0},
    {0x03, "SUB", 0},
    {0x04, "DIV", 0},
    {0x05, "SDIV", 0},
    {0x06, "MOD", 0},
    {0x07, "SMOD", 0},
    {0x08, "ADDMOD", 0},
    {0x09, "MULMOD", 0},
    {0x0a, "EXP", 0},
    {0x0b, "SIGNEXTEND", 0},
    {0x10, "LT", 0},
    {0x11, "GT", 0},
    {0x12, "SLT", 0},
    {0x13, "SGT", 0},
    {0x14, "EQ", 0},
    {0x15, "ISZERO", 0},
    {0x16, "AND", 0},
    {0x17, "OR", 0},
    {0x18, "XOR", 0},
    {0x19, "NOT", 0},
    {0x1a, "BYTE", 0},
    {0x20, "SHA3", 0},
    {0x30, "ADDRESS", 0},
    {0x31, "BALANCE", 0},
    {0x32, "ORIGIN", 0},
    {0x33, "CALLER", 0},
    {0x34, "CALLVALUE", 0},
    {0x35, "CALLDATALOAD", 0},
    {0x36, "CALLDATASIZE", 0},
    {0x37, "CALLDATACOPY", 0},
    {0x38, "CODESIZE", 0},
    {0x39, "CODECOPY", 0},
    {0x3a, "GASPRICE", 0},
    {0x3b, "EXTCODESIZE", 0},
    {0x3c, "EXTCODECOPY", 0},
    {0x3d, "RETURNDATASIZE", 0},
    {0x3e, "RETURNDATACOPY", 0},
    {0x3f, "EXTCODEHASH", 0},
    {0x40, "BLOCKHASH", 0},
    {0x41, "COINBASE", 0},
    {0x42, "TIMESTAMP", 0},
    {0x43, "NUMBER", 0},
    {0x44, "DIFFICULTY", 0},
    {0x45, "GASLIMIT", 0},
    {0x50, "POP", 0},
    {0x51, "MLOAD", 0},
    {0x52, "MSTORE", 0},
    {0x53, "MSTORE8", 0},
    {0x54, "SLOAD", 0},
    {0x55, "SSTORE", 0},
    {0x56, "JUMP", 0},
    {0x57, "JUMPI", 0},
    {0x58, "PC", 0},
    {0x59, "MSIZE", 0},
    {0x5a, "GAS", 0},
    {0x5b, "JUMPDEST", 0},
    {0x60, "PUSH1", 1},
    {0x61, "PUSH2", 2},
    {0x62, "PUSH3", 3},
    {0x63, "PUSH4", 4},
    {0x64, "PUSH5", 5},
    {0x65, "PUSH6", 6},
    {0x66, "PUSH7", 7},
    {0x67, "PUSH8", 8},
    {0x68, "PUSH9", 9},
    {0x69, "PUSH10", 10},
    {0x6a, "PUSH11", 11},
    {0x6b, "PUSH12", 12},
    {0x6c, "PUSH13", 13},
    {0x6d, "PUSH14", 14},
    {0x6e, "PUSH15", 15},
    {0x6f, "PUSH16", 16},
    {0x70, "PUSH17", 17},
    {0x71, "PUSH18", 18},
    {0x72, "PUSH19", 19},
    {0x73, "PUSH20", 20},
    {0x74, "PUSH21", 21},
    {0x75, "PUSH22", 22},
    {0x76, "PUSH23", 23},
    {0x77, "PUSH24", 24},
    {0x78, "PUSH25", 25},
    {0x79, "PUSH26", 26},
    {0x7a, "PUSH27", 27},
    {0x7b, "PUSH28", 28},
    {0x7c, "PUSH29", 29},
    {0x7d, "PUSH30", 30},
    {0x7e, "PUSH31", 31},
    {0x7f, "PUSH32", 32},
    {0x80, "DUP1", 0},
    {0x81, "DUP2", 0},
    {0x82, "DUP3", 0},
    {0x83, "DUP4", 0},
    {0x84, "DUP5", 0},
    {0x85, "DUP6", 0},
    {0x86, "DUP7", 0},
    {0x87, "DUP8", 0},
    {0x88, "DUP9", 0},
    {0x89, "DUP10", 0},
    {0x8a, "DUP11", 0},
    {0x8b, "DUP12", 0},
    {0x8c, "DUP13", 0},
    {0x8d, "DUP14", 0},
    {0x8e, "DUP15", 0},
    {0x8f, "DUP16", 0},
    {0x90, "SWAP1", 0},
    {0x91, "SWAP2", 0},
    {0x92, "SWAP3", 0},
    {0x93, "SWAP4", 0},
    {0x94, "SWAP5", 0},
    {0x95, "SWAP6", 0},
    {0x96, "SWAP7", 0},
    {0x97, "SWAP8", 0},
    {0x98, "SWAP9", 0},
    {0x99, "SWAP10", 0},
    {0x9a, "SWAP11", 0},
    {0x9b, "SWAP12", 0},
    {0x9c, "SWAP13", 0},
    {0x9d, "SWAP14", 0},
    {0x9e, "SWAP15", 0},
    {0x9f, "SWAP16", 0},
    {0xa0, "LOG0", 0},
    {0xa1, "LOG1", 0},
    {0xa2, "LOG2", 0},
    {0xa3, "LOG3", 0},
    {0xa4, "LOG4", 0},
    {0xf0, "CREATE", 0},
    {0xf1, "CALL", 0},
    {0xf2, "CALLCODE", 0},
    {0xf3, "RETURN", 0},
    {0xf4, "DELEGATECALL", 0},
    {0xf5, "CREATE2", 0},
    {0xfa, "STATICCALL", 0},
    {0xfd, "REVERT", 0},
    {0xff, "SELFDESTRUCT", 0},
};

}  // namespace

const OpcodeTable& OpcodeTable::evm_default() {
    static const OpcodeTable table = [] {
        OpcodeTable t;
        for (const auto& row : opcode_rows) {
            t.entries_[row.opcode] = Entry{row.mnemonic, row.operand_len, true};
        }
        return t;
    }();
    return table;
}

OpcodeTable OpcodeTable::from_file(const std::string& path) {
    OpcodeTable table;
    std::istringstream in(read_text_file(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        std::istringstream row{std::string(s)};
        std::string byte_str, mnemonic, len_str;
        if (!(row >> byte_str >> mnemonic >> len_str)) {
            raise(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected 'opcode mnemonic operand_len'");
        }
        auto bytes = decode_hex(byte_str);
        if (!bytes || bytes->size() != 1) {
            raise(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": invalid opcode byte '" + byte_str + "'");
        }
        auto len = parse_int(len_str);
        if (!len || *len < 0 || *len > 32) {
            raise(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": invalid operand length '" + len_str + "'");
        }
        table.entries_[(*bytes)[0]] = Entry{mnemonic, static_cast<uint8_t>(*len), true};
    }
    return table;
}

size_t OpcodeTable::named_count() const {
    size_t n = 0;
    for (const auto& e : entries_) {
        if (e.assigned) ++n;
    }
    return n;
}

std::vector<std::string> OpcodeTable::mnemonics() const {
    std::set<std::string> set;
    for (const auto& e : entries_) {
        if (e.assigned) set.insert(e.mnemonic);
    }
    return {set.begin(), set.end()};
}

bool OpcodeTable::has_mnemonic(const std::string& mnemonic) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.assigned && e.mnemonic == mnemonic; });
}

InstructionStream disassemble(std::span<const uint8_t> code, const OpcodeTable& table) {
    InstructionStream stream;
    stream.source_length = code.size();
    stream.instructions.reserve(code.size());
    size_t pos = 0;
    while (pos < code.size()) {
        const uint8_t opcode = code[pos];
        const auto& entry = table.entry(opcode);
        Instruction ins;
        ins.offset = static_cast<uint32_t>(pos);
        ins.opcode = opcode;
        ins.mnemonic = entry.mnemonic;
        ins.invalid_opcode = !entry.assigned;
        const size_t want = entry.operand_len;
        const size_t have = std::min(want, code.size() - pos - 1);
        ins.operand.assign(code.begin() + pos + 1, code.begin() + pos + 1 + have);
        ins.operand_consumed = static_cast<uint8_t>(have);
        if (have < want) {
            ins.truncated_push = true;
            ins.operand.resize(want, 0);  // zero-pad to the declared PUSH width
        }
        pos += 1 + have;
        stream.instructions.push_back(std::move(ins));
    }
    return stream;
}

std::string format_listing(const InstructionStream& stream) {
    std::string out;
    for (const auto& ins : stream.instructions) {
        out += std::to_string(ins.offset);
        out += ' ';
        out += ins.mnemonic;
        if (!ins.operand.empty()) {
            out += ' ';
            out += encode_hex(ins.operand);
        }
        out += '\n';
    }
    return out;
}

}  // namespace betscan
