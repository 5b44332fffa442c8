#include "core/split.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/util.hpp"

namespace betscan {

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        raise(ErrorKind::Config, "train_fraction must be in (0, 1)");
    }
}

DatasetSplit split_dataset(const LabeledDataset& ds, const SplitSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    DatasetSplit split;

    auto take = [&](std::vector<size_t>& rows) {
        rng.shuffle(rows);
        const auto n_train =
            static_cast<size_t>(std::floor(spec.train_fraction * static_cast<double>(rows.size()) + 0.5));
        for (size_t i = 0; i < rows.size(); ++i) {
            (i < n_train ? split.train_rows : split.test_rows).push_back(rows[i]);
        }
    };

    if (spec.stratified) {
        std::vector<size_t> positives, negatives;
        for (size_t i = 0; i < ds.num_rows(); ++i) {
            if (ds.label(i) == 1) positives.push_back(i);
            else if (ds.label(i) == 0) negatives.push_back(i);
        }
        take(positives);
        take(negatives);
    } else {
        std::vector<size_t> rows = ds.labeled_rows();
        take(rows);
    }
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.test_rows.begin(), split.test_rows.end());
    return split;
}

void write_split(const LabeledDataset& ds, const DatasetSplit& split, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"account", "fold"});
    std::vector<std::pair<size_t, const char*>> rows;
    for (size_t r : split.train_rows) rows.emplace_back(r, "train");
    for (size_t r : split.test_rows) rows.emplace_back(r, "test");
    std::sort(rows.begin(), rows.end());
    for (const auto& [row, fold] : rows) out.write_row({ds.id(row), fold});
    out.close();
}

DatasetSplit read_split(const LabeledDataset& ds, const std::string& path) {
    CsvReader reader(path);
    if (reader.header() != std::vector<std::string>{"account", "fold"}) {
        raise(ErrorKind::Parse, path + ": expected header 'account,fold'");
    }
    std::unordered_map<std::string, size_t> row_of;
    for (size_t i = 0; i < ds.num_rows(); ++i) row_of.emplace(ds.id(i), i);

    DatasetSplit split;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() != 2) {
            raise(ErrorKind::Parse, path + ":" + std::to_string(reader.line_number()) + ": expected 2 fields");
        }
        auto it = row_of.find(fields[0]);
        if (it == row_of.end()) {
            raise(ErrorKind::Parse, path + ": account " + fields[0] + " not present in the dataset");
        }
        if (fields[1] == "train") {
            split.train_rows.push_back(it->second);
        } else if (fields[1] == "test") {
            split.test_rows.push_back(it->second);
        } else {
            raise(ErrorKind::Parse, path + ": invalid fold '" + fields[1] + "'");
        }
    }
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.test_rows.begin(), split.test_rows.end());
    return split;
}

}  // namespace betscan
