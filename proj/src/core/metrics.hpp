#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace betscan {

// Binary-classification confusion counts and derived metrics; positive
// class = gambling. Zero denominators yield 0.
struct MetricsReport {
    uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

MetricsReport evaluate(std::span<const int> predictions, std::span<const int> labels);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& task, const MetricsReport& m);

}  // namespace betscan
