#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/gbdt.hpp"

namespace betscan {

namespace {

size_t fraction_count(double fraction, size_t n) {
    if (fraction <= 0.0) return 0;
    const double raw = fraction * static_cast<double>(n);
    const auto count = static_cast<size_t>(std::ceil(raw - 1e-9));
    return std::min(count, n);
}

}  // namespace

GossResult goss_sample(const GradientState& grads, double top_rate, double other_rate, Rng& rng) {
    if (top_rate < 0.0 || top_rate > 1.0 || other_rate < 0.0 || other_rate > 1.0 ||
        top_rate + other_rate > 1.0 + 1e-12) {
        raise(ErrorKind::Config, "GOSS fractions must satisfy a, b in [0,1] and a + b <= 1");
    }
    const size_t n = grads.size();
    GossResult result;
    if (n == 0) return result;

    // Rank by |g| descending; stable sort keeps ties in ascending index order.
    std::vector<int32_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int32_t>(i);
    std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
        return std::fabs(grads.grad[a]) > std::fabs(grads.grad[b]);
    });

    const size_t top_count = fraction_count(top_rate, n);
    const size_t rest = n - top_count;
    const size_t sample_count = other_rate > 0.0 ? std::min(fraction_count(other_rate, n), rest) : 0;

    std::vector<std::pair<int32_t, double>> selected;
    selected.reserve(top_count + sample_count);
    for (size_t i = 0; i < top_count; ++i) selected.emplace_back(order[i], 1.0);

    if (sample_count > 0) {
        const double amplify = (1.0 - top_rate) / other_rate;
        const auto draws = rng.sample_without_replacement(rest, sample_count);
        for (size_t d : draws) selected.emplace_back(order[top_count + d], amplify);
    }

    std::sort(selected.begin(), selected.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    result.indices.reserve(selected.size());
    result.weights.reserve(selected.size());
    for (const auto& [idx, w] : selected) {
        result.indices.push_back(idx);
        result.weights.push_back(w);
    }
    return result;
}

GossResult goss_sample(const GradientState& grads, double top_rate, double other_rate, uint64_t seed) {
    Rng rng(seed);
    return goss_sample(grads, top_rate, other_rate, rng);
}

}  // namespace betscan
