#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace betscan {

// Deterministic RNG used everywhere randomness is needed. Bounded draws are
// implemented here (rejection sampling) rather than via std distributions,
// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n);

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller.
    double normal(double mean = 0.0, double stddev = 1.0);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values drawn uniformly from [0, n), in draw order.
    std::vector<size_t> sample_without_replacement(size_t n, size_t k);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// FNV-1a 64-bit content digest; used for feature-schema compatibility checks.
uint64_t fnv1a64(std::string_view data, uint64_t state = 0xcbf29ce484222325ULL);
std::string digest_names(std::span<const std::string> names);

// Round-trip-exact decimal formatting for doubles (std::to_chars shortest form).
std::string format_double(double value);
// Strict parse; returns nullopt for trailing garbage / empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<int64_t> parse_int(std::string_view text);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Reads a whole file; raises Error{Io} when the file cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace betscan
