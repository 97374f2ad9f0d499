#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scorelab/config.hpp"
#include "scorelab/data_io.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/experiment.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/metrics.hpp"

using namespace scorelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "scorelab_unit" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

LabeledDataset parse(const std::string& text, const CsvOptions& opt = {}) {
    std::istringstream in(text);
    return parse_csv(in, opt);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const Config c = Config::parse_string(
        "# top\nseed = 7\n[data]\nsource = csv\n  path = a b.csv  \n; note\n[split]\ntest_counts = 699, 42\n"
        "ratio=0.75\n[data]\nsource = simulate\n");
    CHECK(c.get_u64("", "seed", 0) == 7);
    CHECK(c.get("data", "source", "") == "simulate");
    CHECK(c.get("data", "path", "") == "a b.csv");
    CHECK(c.get_sizes("split", "test_counts", {}) == std::vector<std::size_t>{699, 42});
    CHECK(c.get_double("split", "ratio", 0) == 0.75);
    CHECK(c.get_double("split", "missing", 1.5) == 1.5);
    CHECK(c.sections().size() == 3);
    CHECK_THROWS_AS(c.get_double("data", "source", 0), InvalidArgument);
    CHECK_THROWS_AS(c.require("data", "nope"), InvalidArgument);
    CHECK(Config::parse_string(c.str()) == c);
    try {
        Config::parse_string("[ok]\nkey value\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
    CHECK_THROWS_AS(Config::parse_string("[broken\n"), ParseError);
}

TEST_CASE("format_double round-trips") {
    RngStream rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("csv round trip and column selection") {
    LabeledDataset d;
    d.columns = {"a", "b", "c"};
    d.append(Vector{0.1, -2.5, 1e-300}, 0);
    d.append(Vector{3.0, 1.0 / 3.0, -0.0}, 1);
    d.append(Vector{1e300, 7.0, 2.0}, 0, true);
    std::ostringstream out;
    write_csv(d, out);
    const LabeledDataset back = parse(out.str());
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    CHECK(back.columns == d.columns);
    CHECK(back.synthetic == d.synthetic);

    CsvOptions opt;
    opt.label_column = "y";
    opt.columns = {"c", "a"};
    const LabeledDataset sel = parse("a,b,c,y\n1,2,3,0\n4,5,6,1\n", opt);
    CHECK(sel.features == Matrix{{3.0, 1.0}, {6.0, 4.0}});
    CsvOptions first;
    first.first_n = 2;
    const LabeledDataset quoted = parse("\"Time\",\"V1\",\"V2\",\"Class\"\n0,-1.5,2,\"0\"\n1,0.5,3,\"1\"\n", first);
    CHECK(quoted.columns == std::vector<std::string>{"Time", "V1"});
    CHECK(quoted.count(1) == 1);
}

TEST_CASE("csv errors carry positions") {
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
        parse("a,b,Class\n1,2,0\n1,x,1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 2);
    }
    try {
        parse("a,Class\n1,2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
        CHECK(e.column() == 2);
    }
    CHECK_THROWS_AS(parse("a,label\n1,0\n"), ParseError);
    CHECK_THROWS_AS(parse("a,Class\n1,0\n2\n"), ParseError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), InvalidArgument);
}

TEST_CASE("stratified split counts") {
    const LabeledDataset d = simulate(imbalanced10d_dgp(42));
    const Split s = stratified_split(d, 0.75, 1);
    CHECK(s.train.count(0) == 2122);
    CHECK(s.train.count(1) == 128);
    CHECK(s.test.count(0) == 708);
    CHECK(s.test.count(1) == 42);
    const Split exact = stratified_split(d, std::array<std::size_t, 2>{699, 42}, 1);
    CHECK(exact.train.size() == 2259);
    CHECK(exact.train.count(1) == 128);
    CHECK(exact.test.size() == 741);

    std::vector<std::size_t> all = s.train_index;
    all.insert(all.end(), s.test_index.begin(), s.test_index.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

    const Split again = stratified_split(d, 0.75, 1);
    CHECK(again.test_index == s.test_index);
    CHECK(stratified_split(d, 0.75, 2).test_index != s.test_index);
}

TEST_CASE("small splits and stratification errors") {
    LabeledDataset four;
    four.append(Vector{0.0}, 0);
    four.append(Vector{1.0}, 0);
    four.append(Vector{2.0}, 1);
    four.append(Vector{3.0}, 1);
    const Split s = stratified_split(four, 0.5, 9);
    CHECK(s.train.count(0) == 1);
    CHECK(s.train.count(1) == 1);
    CHECK(s.test.count(0) == 1);
    CHECK(s.test.count(1) == 1);
    LabeledDataset lone = four;
    lone.labels[3] = 0;
    CHECK_THROWS_AS(stratified_split(lone, 0.5, 9), InvalidArgument);
    CHECK_THROWS_AS(stratified_split(four, 1.0, 9), InvalidArgument);
}

TEST_CASE("per-class label flips") {
    const LabeledDataset d = simulate(gauss1d_dgp(3));
    const LabeledDataset same = flip_labels(d, {0, 0}, 5);
    CHECK(same.labels == d.labels);
    CHECK(same.flipped.empty());
    const LabeledDataset f = flip_labels(d, {18, 18}, 5);
    CHECK(f.flipped.size() == 36);
    std::size_t from0 = 0, from1 = 0;
    for (std::size_t i : f.flipped) (d.labels[i] == 0 ? from0 : from1)++;
    CHECK(from0 == 18);
    CHECK(from1 == 18);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < d.size(); ++i) diff += d.labels[i] != f.labels[i];
    CHECK(diff == 36);
    LabeledDataset twice = f;
    for (std::size_t i : f.flipped) twice.labels[i] = 1 - twice.labels[i];
    CHECK(twice.labels == d.labels);
    CHECK_THROWS_AS(flip_labels(d, {1001, 0}, 5), InvalidArgument);
}

TEST_CASE("experiment spec survives a config round trip") {
    for (const auto& name : preset_names()) {
        const ExperimentSpec s = preset_spec(name);
        const Config c = s.to_config();
        CHECK(ExperimentSpec::from_config(c).to_config() == c);
    }
    CHECK_THROWS_AS(preset_spec("nope"), InvalidArgument);
}

TEST_CASE("spec keys are checked but result sections pass") {
    const Config typo = Config::parse_string("[score_net]\nlearnig_rate = 0.1\n");
    CHECK_THROWS_AS(ExperimentSpec::from_config(typo), InvalidArgument);
    const Config manifest = Config::parse_string("[experiment]\nseed = 7\n[results]\nrecall = 1\n[build]\nisa = avx2\n");
    CHECK(ExperimentSpec::from_config(manifest).seed == 7);
}

TEST_CASE("classification experiment end to end") {
    ExperimentSpec s = preset_spec("synthetic-imbalanced-smote");
    s.output_dir = scratch("smote").string();
    const ExperimentResult r = run_experiment(s);
    CHECK(*r.metric("test_rows") == 741);
    CHECK(*r.metric("tn") + *r.metric("fp") + *r.metric("fn") + *r.metric("tp") == 741);
    CHECK(fs::exists(r.manifest_path));

    // Metrics recomputed from the predictions file.
    std::istringstream pred(slurp(fs::path(s.output_dir) / "test_predictions.csv"));
    std::string line;
    std::getline(pred, line);
    std::vector<int> truth, guess;
    while (std::getline(pred, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        truth.push_back(std::stoi(cells[cells.size() - 3]));
        guess.push_back(std::stoi(cells[cells.size() - 2]));
    }
    const Metrics m = metrics(confusion(truth, guess));
    CHECK(m.recall == *r.metric("recall"));
    CHECK(m.f1 == *r.metric("f1"));

    // Synthetic rows are flagged in the written training set.
    CsvOptions opt;
    const LabeledDataset tr = load_csv((fs::path(s.output_dir) / "train_augmented.csv").string(), opt);
    std::size_t synthetic = 0;
    for (auto f : tr.synthetic) synthetic += f;
    CHECK(synthetic == *r.metric("synthetic_rows"));
    CHECK(tr.count(1) == tr.count(0));

    // Rerun from the manifest into a fresh directory.
    ExperimentSpec again = spec_from_manifest(r.manifest_path);
    again.output_dir = scratch("smote_again").string();
    const ExperimentResult r2 = run_experiment(again);
    CHECK(r2.metrics == r.metrics);
    CHECK(r2.outputs == r.outputs);
}

TEST_CASE("test rows are untouched by flips and augmentation") {
    ExperimentSpec s = preset_spec("synthetic-imbalanced-adasyn");
    s.flip_counts = {18, 18};
    s.output_dir = scratch("flip").string();
    const ExperimentResult r = run_experiment(s);
    const Split split = stratified_split(simulate(imbalanced10d_dgp(s.seed)), *s.test_counts, derive_seed(s.seed, 1));
    const std::string expected = fnv1a_hex(std::string_view(
        reinterpret_cast<const char*>(split.test.features.data().data()), split.test.features.size() * sizeof(double)));
    CHECK(r.manifest.get("results", "test_features_hash", "") == expected);
}

TEST_CASE("stage errors name the failing stage") {
    ExperimentSpec s = preset_spec("synthetic-imbalanced-baseline");
    s.source = "csv";
    s.csv_path = "/nonexistent/creditcard.csv";
    s.output_dir = scratch("missing").string();
    try {
        run_experiment(s);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "load");
    }
    ExperimentSpec bad = preset_spec("synthetic-imbalanced-baseline");
    bad.test_counts = std::array<std::size_t, 2>{5000, 1};
    bad.output_dir = scratch("bad").string();
    try {
        run_experiment(bad);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "split");
    }
}

TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
