#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scorelab/augment.hpp"
#include "scorelab/classify.hpp"
#include "scorelab/config.hpp"
#include "scorelab/data_io.hpp"
#include "scorelab/langevin.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

enum class Pipeline {
    Classify,        // load -> split -> flip -> standardize -> augment -> fit -> evaluate
    DensityRecon1d,  // simulate -> train per class -> reconstruct on a grid -> JSD
};

enum class ClassifierKind { Knn, Radius, Mlp, Logistic };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::Knn;
    VoteConfig vote;
    MlpClassifierConfig mlp;
    LogisticConfig logistic;
    double threshold = 0.5;  // mlp / logistic probability cut
};

// One experiment, as read from a config file (schema in docs/formats.md).
struct ExperimentSpec {
    std::string name = "experiment";
    Pipeline pipeline = Pipeline::Classify;
    std::uint64_t seed = 42;
    std::string output_dir = "out";

    // [data]
    std::string source = "simulate";  // simulate | csv
    std::string preset = "imbalanced10d";
    std::string csv_path;
    CsvOptions csv;

    // [split]
    double train_ratio = 0.75;
    std::optional<std::array<std::size_t, 2>> test_counts;

    std::array<std::size_t, 2> flip_counts{0, 0};
    bool standardize = true;

    // [augment]; n_new unset = balance the training classes
    AugmentPlan augment;
    std::optional<std::size_t> n_new;

    TrainConfig score_net;
    LangevinConfig langevin;
    ClassifierSpec classifier;

    // [density]
    double grid_lo = -6.0, grid_hi = 6.0;
    std::size_t grid_points = 241;
    std::size_t points_per_segment = 2;

    static ExperimentSpec from_config(const Config& cfg);
    // Every field written out, defaults included.
    Config to_config() const;
};

struct ExperimentResult {
    std::vector<std::pair<std::string, double>> metrics;       // in emission order
    std::vector<std::pair<std::string, std::string>> outputs;  // file name -> FNV-1a 64 hex
    std::vector<std::string> log;
    Config manifest;
    std::string manifest_path;

    std::optional<double> metric(const std::string& key) const;
};

// Runs the pipeline and writes its files plus manifest.ini into output_dir.
// Any failure is rethrown as StageError naming the stage that raised it.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Reads the spec back out of a manifest (result sections are ignored).
ExperimentSpec spec_from_manifest(const std::string& manifest_path);

// Built-in specs mirroring the reference scenarios.
std::vector<std::string> preset_names();
ExperimentSpec preset_spec(const std::string& name);

// Child seed k of a root seed, matching RngStream(seed).split(k).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace scorelab
