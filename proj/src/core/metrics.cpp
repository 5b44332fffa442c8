#include "core/metrics.hpp"

#include "core/error.hpp"
#include "core/util.hpp"

namespace betscan {

MetricsReport evaluate(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        raise(ErrorKind::Config, "predictions and labels must have equal length");
    }
    MetricsReport m;
    for (size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        const int p = predictions[i];
        if ((y != 0 && y != 1) || (p != 0 && p != 1)) {
            raise(ErrorKind::Config, "evaluate expects binary predictions and labels");
        }
        if (p == 1) {
            y == 1 ? ++m.tp : ++m.fp;
        } else {
            y == 1 ? ++m.fn : ++m.tn;
        }
    }
    const uint64_t total = m.tp + m.fp + m.tn + m.fn;
    m.accuracy = total ? static_cast<double>(m.tp + m.tn) / static_cast<double>(total) : 0.0;
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

std::string metrics_csv_header() { return "task,tp,fp,tn,fn,accuracy,precision,recall,f1"; }

std::string metrics_csv_row(const std::string& task, const MetricsReport& m) {
    return task + "," + std::to_string(m.tp) + "," + std::to_string(m.fp) + "," + std::to_string(m.tn) +
           "," + std::to_string(m.fn) + "," + format_double(m.accuracy) + "," + format_double(m.precision) +
           "," + format_double(m.recall) + "," + format_double(m.f1);
}

}  // namespace betscan
