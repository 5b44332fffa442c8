#include "core/efb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "core/error.hpp"

namespace betscan {

namespace {

struct NonzeroSet {
    std::vector<uint64_t> bits;
    size_t count = 0;

    static NonzeroSet of_column(ConstMatrixView X, int feature) {
        NonzeroSet s;
        s.bits.assign((X.rows + 63) / 64, 0);
        for (size_t r = 0; r < X.rows; ++r) {
            if (X.at(r, feature) != 0.0) {
                s.bits[r >> 6] |= uint64_t{1} << (r & 63);
                ++s.count;
            }
        }
        return s;
    }
};

double conflict_rate(const NonzeroSet& a, const NonzeroSet& b) {
    size_t both = 0, either = 0;
    for (size_t w = 0; w < a.bits.size(); ++w) {
        both += std::popcount(a.bits[w] & b.bits[w]);
        either += std::popcount(a.bits[w] | b.bits[w]);
    }
    if (either == 0) return 0.0;
    return static_cast<double>(both) / static_cast<double>(either);
}

bool bundleable(ConstMatrixView X, int feature) {
    for (size_t r = 0; r < X.rows; ++r) {
        const double v = X.at(r, feature);
        if (std::isnan(v) || !std::isfinite(v) || v < 0.0) return false;
    }
    return true;
}

}  // namespace

std::vector<std::vector<int>> efb_plan(ConstMatrixView X, double conflict_threshold) {
    if (conflict_threshold < 0.0 || conflict_threshold > 1.0) {
        raise(ErrorKind::Config, "EFB conflict threshold must be in [0, 1]");
    }
    const int n_features = static_cast<int>(X.cols);
    std::vector<NonzeroSet> sets(n_features);
    std::vector<bool> eligible(n_features);
    for (int f = 0; f < n_features; ++f) {
        sets[f] = NonzeroSet::of_column(X, f);
        eligible[f] = bundleable(X, f);
    }

    // Greedy packing order: nonzero count descending, index ascending.
    std::vector<int> order(n_features);
    for (int f = 0; f < n_features; ++f) order[f] = f;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sets[a].count > sets[b].count; });

    std::vector<std::vector<int>> bundles;
    for (int f : order) {
        if (!eligible[f]) {
            bundles.push_back({f});
            continue;
        }
        bool placed = false;
        for (auto& bundle : bundles) {
            if (bundle.size() == 1 && !eligible[bundle[0]]) continue;
            bool fits = true;
            for (int member : bundle) {
                if (conflict_rate(sets[f], sets[member]) > conflict_threshold) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                bundle.push_back(f);
                placed = true;
                break;
            }
        }
        if (!placed) bundles.push_back({f});
    }
    return bundles;
}

EfbBundling efb_bundle(ConstMatrixView X, double conflict_threshold) {
    EfbBundling out;
    out.bundles = efb_plan(X, conflict_threshold);
    out.offsets.assign(X.cols, 0.0);
    out.bundled_columns.reserve(out.bundles.size());

    for (const auto& bundle : out.bundles) {
        std::vector<double> column(X.rows, 0.0);
        double offset = 0.0;
        for (int feature : bundle) {
            out.offsets[feature] = offset;
            double max_value = 0.0;
            for (size_t r = 0; r < X.rows; ++r) {
                const double v = X.at(r, feature);
                if (v != 0.0) column[r] = v + offset;
                max_value = std::max(max_value, v);
            }
            offset += max_value + 1.0;
        }
        out.bundled_columns.push_back(std::move(column));
    }
    return out;
}

}  // namespace betscan
