#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "scorelab/config.hpp"
#include "scorelab/data_io.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/rng.hpp"

namespace scorelab {

namespace {

void split_cells(const std::string& line, std::vector<std::string>& cells) {
    cells.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.remove_suffix(1);
        while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
        if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
        cells.emplace_back(cell);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
}

bool parse_cell(const std::string& s, double& v) {
    const char* first = s.data();
    const char* last = first + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

LabeledDataset parse_csv(std::istream& in, const CsvOptions& opt) {
    std::string line;
    if (!std::getline(in, line) || line.find_first_not_of(" \t\r") == std::string::npos)
        throw ParseError("empty CSV: no header row", 1, 0);
    std::vector<std::string> header, cells;
    split_cells(line, header);

    const auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto label_col = find_col(opt.label_column);
    if (!label_col) throw ParseError("label column '" + opt.label_column + "' not found", 1, 0);
    const auto prov_col = find_col(opt.provenance_column);

    std::vector<std::size_t> feature_cols;
    if (opt.columns.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (c != *label_col && (!prov_col || c != *prov_col)) feature_cols.push_back(c);
    } else {
        for (const auto& name : opt.columns) {
            const auto c = find_col(name);
            if (!c) throw ParseError("feature column '" + name + "' not found", 1, 0);
            feature_cols.push_back(*c);
        }
    }
    if (opt.first_n) {
        if (*opt.first_n > feature_cols.size()) throw ParseError("fewer feature columns than requested", 1, 0);
        feature_cols.resize(*opt.first_n);
    }

    LabeledDataset data;
    data.features = Matrix(0, feature_cols.size());
    for (std::size_t c : feature_cols) data.columns.push_back(header[c]);
    Vector row(feature_cols.size());
    std::size_t r = 1;
    while (std::getline(in, line)) {
        ++r;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        split_cells(line, cells);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             r, std::min(cells.size(), header.size()) + 1);
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::size_t c = feature_cols[j];
            if (!parse_cell(cells[c], row[j]) || !std::isfinite(row[j]))
                throw ParseError("non-numeric cell '" + cells[c] + "'", r, c + 1);
        }
        double label = 0.0;
        if (!parse_cell(cells[*label_col], label) || (label != 0.0 && label != 1.0))
            throw ParseError("label must be 0 or 1, found '" + cells[*label_col] + "'", r, *label_col + 1);
        bool synthetic = false;
        if (prov_col) {
            double p = 0.0;
            if (!parse_cell(cells[*prov_col], p) || (p != 0.0 && p != 1.0))
                throw ParseError("provenance flag must be 0 or 1", r, *prov_col + 1);
            synthetic = p == 1.0;
        }
        data.append(row, static_cast<int>(label), synthetic);
    }
    return data;
}

LabeledDataset load_csv(const std::string& path, const CsvOptions& opt) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open CSV file " + path);
    return parse_csv(in, opt);
}

void write_csv(const LabeledDataset& data, std::ostream& out, const std::string& label_column, bool provenance) {
    data.validate();
    const bool prov = provenance || std::any_of(data.synthetic.begin(), data.synthetic.end(), [](auto f) { return f; });
    for (std::size_t j = 0; j < data.dim(); ++j)
        out << (j < data.columns.size() ? data.columns[j] : "x" + std::to_string(j)) << ',';
    out << label_column << (prov ? ",synthetic\n" : "\n");
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.features.row(i)) out << format_double(v) << ',';
        out << data.labels[i];
        if (prov) out << ',' << (data.synthetic.empty() ? 0 : int(data.synthetic[i]));
        out << '\n';
    }
}

void save_csv(const LabeledDataset& data, const std::string& path, const std::string& label_column, bool provenance) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    write_csv(data, out, label_column, provenance);
}

namespace {

Split split_by_counts(const LabeledDataset& data, const std::array<std::size_t, 2>& test_counts,
                      std::uint64_t seed) {
    RngStream root(seed);
    Split s;
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data.labels[i] == c) idx.push_back(i);
        if (idx.size() < 2)
            throw InvalidArgument("cannot stratify: class " + std::to_string(c) + " has fewer than 2 rows");
        if (test_counts[c] > idx.size())
            throw InvalidArgument("test count exceeds the size of class " + std::to_string(c));
        RngStream rng = root.split(static_cast<std::uint64_t>(c));
        shuffle(idx, rng);
        s.test_index.insert(s.test_index.end(), idx.begin(), idx.begin() + test_counts[c]);
        s.train_index.insert(s.train_index.end(), idx.begin() + test_counts[c], idx.end());
    }
    std::sort(s.train_index.begin(), s.train_index.end());
    std::sort(s.test_index.begin(), s.test_index.end());
    s.train = data.subset(s.train_index);
    s.test = data.subset(s.test_index);
    // Carry flip records over to the new row positions.
    for (std::size_t f : data.flipped) {
        auto it = std::lower_bound(s.train_index.begin(), s.train_index.end(), f);
        if (it != s.train_index.end() && *it == f) {
            s.train.flipped.push_back(static_cast<std::size_t>(it - s.train_index.begin()));
            continue;
        }
        it = std::lower_bound(s.test_index.begin(), s.test_index.end(), f);
        s.test.flipped.push_back(static_cast<std::size_t>(it - s.test_index.begin()));
    }
    return s;
}

}  // namespace

Split stratified_split(const LabeledDataset& data, double train_ratio, std::uint64_t seed) {
    data.validate();
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw InvalidArgument("split ratio must lie in (0, 1)");
    std::array<std::size_t, 2> counts{};
    for (int c = 0; c < 2; ++c) {
        const std::size_t n = data.count(c);
        if (n < 2) throw InvalidArgument("cannot stratify: class " + std::to_string(c) + " has fewer than 2 rows");
        const double t = std::nearbyint((1.0 - train_ratio) * static_cast<double>(n));
        counts[c] = std::clamp<std::size_t>(static_cast<std::size_t>(t), 1, n - 1);
    }
    return split_by_counts(data, counts, seed);
}

Split stratified_split(const LabeledDataset& data, std::array<std::size_t, 2> test_counts, std::uint64_t seed) {
    data.validate();
    return split_by_counts(data, test_counts, seed);
}

LabeledDataset flip_labels(const LabeledDataset& data, std::array<std::size_t, 2> counts, std::uint64_t seed) {
    data.validate();
    LabeledDataset out = data;
    RngStream root(seed);
    std::vector<std::size_t> members[2];
    for (std::size_t i = 0; i < data.size(); ++i) members[data.labels[i]].push_back(i);
    for (int c = 0; c < 2; ++c) {
        if (counts[c] > members[c].size())
            throw InvalidArgument("flip count " + std::to_string(counts[c]) + " exceeds class " + std::to_string(c) +
                                  " size " + std::to_string(members[c].size()));
        RngStream rng = root.split(static_cast<std::uint64_t>(c));
        const auto flipped = flip_labels(out, counts[c], rng, &members[c]);
        out.flipped.insert(out.flipped.end(), flipped.begin(), flipped.end());
    }
    std::sort(out.flipped.begin(), out.flipped.end());
    return out;
}

}  // namespace scorelab
