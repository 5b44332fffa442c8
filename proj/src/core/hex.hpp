#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace betscan {

// Decodes a hex string (with or without 0x prefix, any case) into bytes.
// Returns nullopt on odd length or non-hex characters. "0x" and "" decode
// to an empty byte sequence.
std::optional<std::vector<uint8_t>> decode_hex(std::string_view hex);

// Lowercase hex, optionally 0x-prefixed.
std::string encode_hex(std::span<const uint8_t> bytes, bool with_prefix = true);

// Canonical account form: lowercase, 0x-prefixed, exactly 40 hex digits.
// Returns nullopt when the input is not a 20-byte hex account.
std::optional<std::string> normalize_account(std::string_view account);

// Canonical bytecode form: lowercase, 0x-prefixed, even number of hex digits
// (possibly zero). Returns nullopt on malformed input.
std::optional<std::string> normalize_bytecode(std::string_view bytecode);

}  // namespace betscan
