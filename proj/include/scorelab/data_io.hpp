#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scorelab/dataset.hpp"

namespace scorelab {

struct CsvOptions {
    std::string label_column = "Class";
    // Feature columns to keep, by name and in this order. Empty keeps every
    // column other than the label and provenance columns.
    std::vector<std::string> columns;
    // Keep only the first n feature columns (after `columns` selection).
    std::optional<std::size_t> first_n;
    std::string provenance_column = "synthetic";
};

// Header row required. Cells may be wrapped in double quotes. Labels must be
// 0 or 1. Errors carry the 1-based row (header = row 1) and column.
LabeledDataset parse_csv(std::istream& in, const CsvOptions& opt = {});
LabeledDataset load_csv(const std::string& path, const CsvOptions& opt = {});

// Feature columns (names from `columns`, or x0, x1, ...), then the label column,
// then the provenance column when any row is synthetic or `provenance` is set.
void write_csv(const LabeledDataset& data, std::ostream& out, const std::string& label_column = "Class",
               bool provenance = false);
void save_csv(const LabeledDataset& data, const std::string& path, const std::string& label_column = "Class",
              bool provenance = false);

struct Split {
    LabeledDataset train, test;
    std::vector<std::size_t> train_index, test_index;  // rows of the input, ascending
};

// Per class c, round-half-even((1 - train_ratio) * n_c) rows go to the test
// side, clamped to [1, n_c - 1]. Throws InvalidArgument if a class has fewer
// than 2 rows.
Split stratified_split(const LabeledDataset& data, double train_ratio, std::uint64_t seed);
// Exact per-class test counts.
Split stratified_split(const LabeledDataset& data, std::array<std::size_t, 2> test_counts, std::uint64_t seed);

// Flips exactly counts[c] labels within class c (drawn without replacement
// from stream split(c) of the seed) and records the rows in `flipped`.
LabeledDataset flip_labels(const LabeledDataset& data, std::array<std::size_t, 2> counts, std::uint64_t seed);

}  // namespace scorelab
