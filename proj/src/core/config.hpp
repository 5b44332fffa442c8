#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace betscan {

// Flat key=value configuration: one `key = value` pair per line, `#` starts
// a comment. Later assignments win, so CLI overrides are applied by parsing
// them after the file.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);

    // Parses a single "key=value" string (CLI --set form). Raises
    // Error{Config} when '=' is missing or the key is empty.
    void set_pair(std::string_view pair);
    void set(std::string_view key, std::string_view value);

    bool has(std::string_view key) const;
    std::string get_string(std::string_view key, std::string_view fallback) const;
    int64_t get_int(std::string_view key, int64_t fallback) const;
    double get_double(std::string_view key, double fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    // Keys in insertion order (deterministic reporting).
    const std::vector<std::string>& keys() const { return order_; }

private:
    std::map<std::string, std::string, std::less<>> values_;
    std::vector<std::string> order_;
};

}  // namespace betscan
