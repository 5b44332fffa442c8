#include "core/hex.hpp"

namespace betscan {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string_view strip_prefix(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
        return hex.substr(2);
    }
    return hex;
}

}  // namespace

std::optional<std::vector<uint8_t>> decode_hex(std::string_view hex) {
    std::string_view digits = strip_prefix(hex);
    if (digits.size() % 2 != 0) return std::nullopt;
    std::vector<uint8_t> out;
    out.reserve(digits.size() / 2);
    for (size_t i = 0; i < digits.size(); i += 2) {
        int hi = hex_value(digits[i]);
        int lo = hex_value(digits[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string encode_hex(std::span<const uint8_t> bytes, bool with_prefix) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2 + 2);
    if (with_prefix) out += "0x";
    for (uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

std::optional<std::string> normalize_account(std::string_view account) {
    std::string_view digits = strip_prefix(account);
    if (digits.size() != 40) return std::nullopt;
    std::string out = "0x";
    out.reserve(42);
    for (char c : digits) {
        if (hex_value(c) < 0) return std::nullopt;
        out += (c >= 'A' && c <= 'F') ? static_cast<char>(c - 'A' + 'a') : c;
    }
    return out;
}

std::optional<std::string> normalize_bytecode(std::string_view bytecode) {
    std::string_view digits = strip_prefix(bytecode);
    if (digits.size() % 2 != 0) return std::nullopt;
    std::string out = "0x";
    out.reserve(digits.size() + 2);
    for (char c : digits) {
        if (hex_value(c) < 0) return std::nullopt;
        out += (c >= 'A' && c <= 'F') ? static_cast<char>(c - 'A' + 'a') : c;
    }
    return out;
}

}  // namespace betscan
