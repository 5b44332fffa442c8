#include "core/config.hpp"

#include <sstream>

#include "core/error.hpp"
#include "core/util.hpp"

namespace betscan {

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    KeyValueConfig cfg;
    std::istringstream in(read_text_file(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string_view::npos) {
            raise(ErrorKind::Config,
                  path + ":" + std::to_string(lineno) + ": expected key=value, got '" + std::string(s) + "'");
        }
        std::string_view key = trim(s.substr(0, eq));
        std::string_view value = trim(s.substr(eq + 1));
        if (key.empty()) {
            raise(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": empty key");
        }
        cfg.set(key, value);
    }
    return cfg;
}

void KeyValueConfig::set_pair(std::string_view pair) {
    size_t eq = pair.find('=');
    if (eq == std::string_view::npos || trim(pair.substr(0, eq)).empty()) {
        raise(ErrorKind::Config, "expected key=value, got '" + std::string(pair) + "'");
    }
    set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

void KeyValueConfig::set(std::string_view key, std::string_view value) {
    auto [it, inserted] = values_.insert_or_assign(std::string(key), std::string(value));
    if (inserted) order_.emplace_back(key);
}

bool KeyValueConfig::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::string KeyValueConfig::get_string(std::string_view key, std::string_view fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? std::string(fallback) : it->second;
}

int64_t KeyValueConfig::get_int(std::string_view key, int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    auto v = parse_int(it->second);
    if (!v) raise(ErrorKind::Config, "key '" + std::string(key) + "': expected integer, got '" + it->second + "'");
    return *v;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    auto v = parse_double(it->second);
    if (!v) raise(ErrorKind::Config, "key '" + std::string(key) + "': expected number, got '" + it->second + "'");
    return *v;
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = to_lower(it->second);
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    raise(ErrorKind::Config, "key '" + std::string(key) + "': expected boolean, got '" + it->second + "'");
}

}  // namespace betscan
