#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace betscan {

struct SplitSpec {
    double train_fraction = 0.8;
    bool stratified = true;
    uint64_t seed = 7;

    void validate() const;
};

struct DatasetSplit {
    std::vector<size_t> train_rows;  // ascending row indices into the dataset
    std::vector<size_t> test_rows;
};

// Splits the labeled rows (label != -1); stratification keeps the class
// ratio within one sample per class. Unlabeled rows belong to neither fold.
DatasetSplit split_dataset(const LabeledDataset& ds, const SplitSpec& spec);

// split CSV: account,fold with fold in {train,test}.
void write_split(const LabeledDataset& ds, const DatasetSplit& split, const std::string& path);
DatasetSplit read_split(const LabeledDataset& ds, const std::string& path);

}  // namespace betscan
