#include "scorelab/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scorelab/density.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/metrics.hpp"
#include "scorelab/simd.hpp"

namespace scorelab {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

const char* pipeline_name(Pipeline p) { return p == Pipeline::Classify ? "classify" : "density-recon-1d"; }

Pipeline parse_pipeline(const std::string& s) {
    if (s == "classify") return Pipeline::Classify;
    if (s == "density-recon-1d") return Pipeline::DensityRecon1d;
    throw InvalidArgument("unknown pipeline '" + s + "'");
}

const char* classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::Knn: return "knn";
        case ClassifierKind::Radius: return "radius";
        case ClassifierKind::Mlp: return "mlp";
        case ClassifierKind::Logistic: return "logistic";
    }
    return "knn";
}

ClassifierKind parse_classifier(const std::string& s) {
    for (auto k : {ClassifierKind::Knn, ClassifierKind::Radius, ClassifierKind::Mlp, ClassifierKind::Logistic})
        if (s == classifier_name(k)) return k;
    throw InvalidArgument("unknown classifier '" + s + "'");
}

std::string join(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::array<std::size_t, 2> pair_of(const std::vector<std::size_t>& v, const std::string& what) {
    if (v.size() != 2) throw InvalidArgument(what + " needs exactly two counts (class 0, class 1)");
    return {v[0], v[1]};
}

DgpSpec dgp_preset(const std::string& name, std::uint64_t seed) {
    if (name == "gauss1d") return gauss1d_dgp(seed);
    if (name == "gauss2d") return gauss2d_dgp(seed);
    if (name == "imbalanced10d") return imbalanced10d_dgp(seed);
    throw InvalidArgument("unknown simulation preset '" + name + "'");
}

double mixture_pdf(const ClassSpec& c, std::span<const double> x) {
    double p = 0.0;
    for (const auto& comp : c.components) p += comp.weight * comp.model.pdf(x);
    return p;
}

// Runs one stage, rethrowing any failure as StageError(stage).
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

struct Writer {
    fs::path dir;
    ExperimentResult* result;

    void file(const std::string& name, const std::string& bytes) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
        out << bytes;
        if (!out) throw InvalidArgument("write failed for " + (dir / name).string());
        result->outputs.emplace_back(name, fnv1a_hex(bytes));
    }
};

void run_classify(const ExperimentSpec& spec, ExperimentResult& res, Writer& w) {
    LabeledDataset data = stage("load", [&] {
        if (spec.source == "simulate") return simulate(dgp_preset(spec.preset, spec.seed));
        if (spec.source == "csv") return load_csv(spec.csv_path, spec.csv);
        throw InvalidArgument("unknown data source '" + spec.source + "'");
    });
    res.log.push_back("loaded " + std::to_string(data.size()) + " rows (" + std::to_string(data.count(0)) +
                      " negative, " + std::to_string(data.count(1)) + " positive)");

    Split split = stage("split", [&] {
        const std::uint64_t s = derive_seed(spec.seed, 1);
        return spec.test_counts ? stratified_split(data, *spec.test_counts, s)
                                : stratified_split(data, spec.train_ratio, s);
    });
    const std::string test_hash_before = fnv1a_hex(std::string_view(
        reinterpret_cast<const char*>(split.test.features.data().data()), split.test.features.size() * sizeof(double)));

    LabeledDataset train = stage("flip", [&] { return flip_labels(split.train, spec.flip_counts, derive_seed(spec.seed, 2)); });
    LabeledDataset test = split.test;

    stage("standardize", [&] {
        if (!spec.standardize) return;
        const ZScoreResult z = zscore(train);
        train = z.scaled;
        test = apply_standardization(test, z.params);
    });

    AugmentResult aug = stage("augment", [&] {
        AugmentPlan plan = spec.augment;
        plan.seed = derive_seed(spec.seed, 3);
        plan.train = spec.score_net;
        plan.train.seed = derive_seed(spec.seed, 5);
        if (plan.train.layer_sizes.empty()) plan.train.layer_sizes = {train.dim(), train.dim()};
        plan.langevin = spec.langevin;
        const std::size_t minority = train.count(plan.minority_label);
        const std::size_t majority = train.count(1 - plan.minority_label);
        plan.n_new = spec.n_new ? *spec.n_new : (majority > minority ? majority - minority : 0);
        return augment(train, plan);
    });
    res.log.insert(res.log.end(), aug.log.begin(), aug.log.end());

    std::vector<int> predicted;
    std::vector<double> confidence;
    stage("fit", [&] {
        const LabeledDataset& fit_set = aug.data;
        const ClassifierSpec& c = spec.classifier;
        switch (c.kind) {
            case ClassifierKind::Knn:
            case ClassifierKind::Radius: {
                VoteConfig vc = c.vote;
                vc.mode = c.kind == ClassifierKind::Knn ? VoteMode::FixedK : VoteMode::FixedRadius;
                for (const auto& p : vote_classify(fit_set, test.features, vc)) {
                    predicted.push_back(p.label);
                    confidence.push_back(p.confidence);
                }
                break;
            }
            case ClassifierKind::Mlp: {
                MlpClassifierConfig mc = c.mlp;
                mc.seed = derive_seed(spec.seed, 4);
                const MlpClassifier m = MlpClassifier::fit(fit_set, mc);
                for (std::size_t i = 0; i < test.size(); ++i) {
                    const double p = m.prob1(test.features.row(i));
                    predicted.push_back(p >= c.threshold ? 1 : 0);
                    confidence.push_back(p);
                }
                w.file("classifier.bin", serialize(m.network()));
                break;
            }
            case ClassifierKind::Logistic: {
                const LogisticFit f = logistic_fit(fit_set, c.logistic);
                res.log.insert(res.log.end(), f.warnings.begin(), f.warnings.end());
                for (std::size_t i = 0; i < test.size(); ++i) {
                    const double p = f.model.prob1(test.features.row(i));
                    predicted.push_back(p >= c.threshold ? 1 : 0);
                    confidence.push_back(p);
                }
                std::string theta;
                for (std::size_t i = 0; i < f.model.theta.size(); ++i)
                    theta += (i ? ", " : "") + format_double(f.model.theta[i]);
                res.log.push_back("logistic theta = " + theta);
                break;
            }
        }
    });

    stage("evaluate", [&] {
        const std::string test_hash_after = fnv1a_hex(std::string_view(
            reinterpret_cast<const char*>(split.test.features.data().data()),
            split.test.features.size() * sizeof(double)));
        if (test_hash_after != test_hash_before) throw Error("test features changed during the run");
        const ConfusionMatrix cm = confusion(test.labels, predicted);
        const Metrics m = metrics(cm);
        res.metrics = {{"tn", double(cm.tn)},
                       {"fp", double(cm.fp)},
                       {"fn", double(cm.fn)},
                       {"tp", double(cm.tp)},
                       {"recall", m.recall},
                       {"precision", m.precision},
                       {"f1", m.f1},
                       {"accuracy", m.accuracy},
                       {"mistakes", double(m.mistakes)},
                       {"degenerate", m.degenerate ? 1.0 : 0.0},
                       {"train_rows", double(aug.data.size())},
                       {"synthetic_rows", double(aug.data.size() - train.size())},
                       {"test_rows", double(test.size())}};
        res.manifest.set("results", "test_features_hash", test_hash_before);
    });

    stage("write", [&] {
        std::ostringstream cm;
        cm << "actual,predicted_negative,predicted_positive\n";
        cm << "negative," << res.metrics[0].second << ',' << res.metrics[1].second << '\n';
        cm << "positive," << res.metrics[2].second << ',' << res.metrics[3].second << '\n';
        w.file("confusion.csv", cm.str());

        std::ostringstream tr;
        write_csv(aug.data, tr, spec.csv.label_column, true);
        w.file("train_augmented.csv", tr.str());

        std::ostringstream pr;
        for (std::size_t j = 0; j < test.dim(); ++j) pr << 'x' << j << ',';
        pr << "label,predicted,confidence\n";
        for (std::size_t i = 0; i < test.size(); ++i) {
            for (double v : test.features.row(i)) pr << format_double(v) << ',';
            pr << test.labels[i] << ',' << predicted[i] << ',' << format_double(confidence[i]) << '\n';
        }
        w.file("test_predictions.csv", pr.str());
        if (aug.score_net) w.file("score_model.bin", serialize(*aug.score_net));
    });
}

void run_density(const ExperimentSpec& spec, ExperimentResult& res, Writer& w) {
    const DgpSpec dgp = stage("simulate", [&] { return dgp_preset(spec.preset, spec.seed); });
    const LabeledDataset data = stage("simulate", [&] { return simulate(dgp); });
    if (data.dim() != 1) throw StageError("simulate", "density-recon-1d needs a one-dimensional preset");
    const Grid grid = Grid::uniform(Vector{spec.grid_lo}, Vector{spec.grid_hi}, std::vector<std::size_t>{spec.grid_points});

    for (int c = 0; c < 2; ++c) {
        const std::string tag = "class" + std::to_string(c);
        const Matrix rows = data.class_rows(c);
        const TrainResult fit = stage("train", [&] {
            TrainConfig tc = spec.score_net;
            if (tc.layer_sizes.empty()) tc.layer_sizes = {1, 1};
            tc.seed = derive_seed(spec.seed, 10 + static_cast<std::uint64_t>(c));
            return train(rows, tc);
        });
        const DensityField field = stage("reconstruct", [&] {
            const InitialDensity anchor = initial_density(rows, InitialDensityMethod::GaussianCentral);
            DensitySettings ds;
            ds.points_per_segment = spec.points_per_segment;
            return construct_density(ScoreField::from_net(fit.net), anchor.x0, anchor.p0, grid, ds);
        });
        res.log.insert(res.log.end(), field.warnings.begin(), field.warnings.end());
        stage("evaluate", [&] {
            const ClassSpec& cs = c == 0 ? dgp.class0 : dgp.class1;
            Vector truth(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = mixture_pdf(cs, field.points.row(i));
            res.metrics.emplace_back("jsd_" + tag, jsd(field.density, truth));
            res.metrics.emplace_back("anchor_x_" + tag, field.anchor[0]);
            res.metrics.emplace_back("anchor_density_" + tag, field.anchor_density);
            res.metrics.emplace_back("final_loss_" + tag, fit.loss_history.back());
            res.metrics.emplace_back("mass_" + tag, field.mass());
            const auto& l = fit.net.layers();
            if (l.size() == 1) {
                res.metrics.emplace_back("slope_" + tag, l[0].weights(0, 0));
                res.metrics.emplace_back("intercept_" + tag, l[0].bias[0]);
            }
            std::ostringstream out;
            out << "x,density,true_density\n";
            for (std::size_t i = 0; i < grid.size(); ++i)
                out << format_double(field.points(i, 0)) << ',' << format_double(field.density[i]) << ','
                    << format_double(truth[i]) << '\n';
            stage("write", [&] {
                w.file("density_" + tag + ".csv", out.str());
                w.file("score_model_" + tag + ".bin", serialize(fit.net));
            });
        });
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) { return RngStream(seed).split(k).seed(); }

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::optional<double> ExperimentResult::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    return std::nullopt;
}

namespace {

// Keys read by from_config. Sections outside this table ([build], [results],
// [outputs] in manifests) are ignored.
const std::map<std::string, std::set<std::string>>& spec_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"name", "pipeline", "seed", "output_dir"}},
        {"data", {"source", "preset", "path", "label_column", "columns", "first_n"}},
        {"split", {"train_ratio", "test_counts"}},
        {"flip", {"counts"}},
        {"preprocess", {"standardize"}},
        {"augment", {"method", "k", "minority_label", "n_new"}},
        {"score_net", {"layers", "learning_rate", "epochs", "batch_size", "objective", "n_slices",
                       "slice_distribution", "plateau_patience", "plateau_tolerance"}},
        {"langevin", {"step", "length", "discard_rate", "start_policy"}},
        {"classifier", {"kind", "k", "radius", "hidden", "epochs", "learning_rate", "momentum", "batch_size",
                        "logistic_epochs", "threshold"}},
        {"density", {"lo", "hi", "points", "points_per_segment"}},
    };
    return keys;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_config(const Config& cfg) {
    for (const auto& [section, entries] : cfg.sections()) {
        const auto it = spec_keys().find(section);
        if (it == spec_keys().end()) continue;
        for (const auto& [key, value] : entries)
            if (!it->second.count(key)) throw InvalidArgument("unknown key '" + key + "' in [" + section + "]");
    }
    ExperimentSpec s;
    s.name = cfg.get("experiment", "name", s.name);
    s.pipeline = parse_pipeline(cfg.get("experiment", "pipeline", pipeline_name(s.pipeline)));
    s.seed = cfg.get_u64("experiment", "seed", s.seed);
    s.output_dir = cfg.get("experiment", "output_dir", s.output_dir);

    s.source = cfg.get("data", "source", s.source);
    s.preset = cfg.get("data", "preset", s.preset);
    s.csv_path = cfg.get("data", "path", s.csv_path);
    s.csv.label_column = cfg.get("data", "label_column", s.csv.label_column);
    s.csv.columns = split_names(cfg.get("data", "columns", ""));
    if (cfg.has("data", "first_n")) s.csv.first_n = cfg.get_size("data", "first_n", 0);

    s.train_ratio = cfg.get_double("split", "train_ratio", s.train_ratio);
    if (cfg.has("split", "test_counts")) s.test_counts = pair_of(cfg.get_sizes("split", "test_counts", {}), "split.test_counts");
    s.flip_counts = pair_of(cfg.get_sizes("flip", "counts", {0, 0}), "flip.counts");
    s.standardize = cfg.get_bool("preprocess", "standardize", s.standardize);

    s.augment.method = parse_augment_method(cfg.get("augment", "method", "none"));
    s.augment.k = cfg.get_size("augment", "k", s.augment.k);
    s.augment.minority_label = static_cast<int>(cfg.get_size("augment", "minority_label", 1));
    const std::string n_new = cfg.get("augment", "n_new", "balance");
    if (n_new != "balance") s.n_new = cfg.get_size("augment", "n_new", 0);

    TrainConfig& t = s.score_net;
    t.layer_sizes = cfg.get_sizes("score_net", "layers", {});
    t.learning_rate = cfg.get_double("score_net", "learning_rate", t.learning_rate);
    t.epochs = cfg.get_size("score_net", "epochs", t.epochs);
    t.batch_size = cfg.get_size("score_net", "batch_size", t.batch_size);
    const std::string obj = cfg.get("score_net", "objective", "sm");
    if (obj != "sm" && obj != "ssm") throw InvalidArgument("score_net.objective must be sm or ssm");
    t.objective = obj == "sm" ? Objective::ScoreMatching : Objective::SlicedScoreMatching;
    t.n_slices = cfg.get_size("score_net", "n_slices", t.n_slices);
    const std::string sd = cfg.get("score_net", "slice_distribution", "gaussian");
    if (sd != "gaussian" && sd != "rademacher") throw InvalidArgument("score_net.slice_distribution must be gaussian or rademacher");
    t.slice_distribution = sd == "gaussian" ? SliceDistribution::Gaussian : SliceDistribution::Rademacher;
    t.plateau_patience = cfg.get_size("score_net", "plateau_patience", t.plateau_patience);
    t.plateau_tolerance = cfg.get_double("score_net", "plateau_tolerance", t.plateau_tolerance);

    LangevinConfig& l = s.langevin;
    l.step = cfg.get_double("langevin", "step", l.step);
    l.length = cfg.get_size("langevin", "length", l.length);
    l.discard_rate = cfg.get_double("langevin", "discard_rate", l.discard_rate);
    const std::string sp = cfg.get("langevin", "start_policy", "score-weighted");
    if (sp != "score-weighted" && sp != "uniform") throw InvalidArgument("langevin.start_policy must be score-weighted or uniform");
    l.start_policy = sp == "uniform" ? StartPolicy::Uniform : StartPolicy::ScoreWeighted;

    ClassifierSpec& c = s.classifier;
    c.kind = parse_classifier(cfg.get("classifier", "kind", classifier_name(c.kind)));
    c.vote.k = cfg.get_size("classifier", "k", c.vote.k);
    c.vote.radius = cfg.get_double("classifier", "radius", c.vote.radius);
    c.mlp.hidden = cfg.get_sizes("classifier", "hidden", c.mlp.hidden);
    c.mlp.epochs = cfg.get_size("classifier", "epochs", c.mlp.epochs);
    c.mlp.learning_rate = cfg.get_double("classifier", "learning_rate", c.mlp.learning_rate);
    c.mlp.momentum = cfg.get_double("classifier", "momentum", c.mlp.momentum);
    c.mlp.batch_size = cfg.get_size("classifier", "batch_size", c.mlp.batch_size);
    c.logistic.epochs = cfg.get_size("classifier", "logistic_epochs", c.logistic.epochs);
    c.threshold = cfg.get_double("classifier", "threshold", c.threshold);

    s.grid_lo = cfg.get_double("density", "lo", s.grid_lo);
    s.grid_hi = cfg.get_double("density", "hi", s.grid_hi);
    s.grid_points = cfg.get_size("density", "points", s.grid_points);
    s.points_per_segment = cfg.get_size("density", "points_per_segment", s.points_per_segment);

    if (!(s.train_ratio > 0.0 && s.train_ratio < 1.0)) throw InvalidArgument("split.train_ratio must lie in (0, 1)");
    s.augment.validate();
    s.langevin.validate();
    return s;
}

Config ExperimentSpec::to_config() const {
    Config c;
    c.set("experiment", "name", name);
    c.set("experiment", "pipeline", pipeline_name(pipeline));
    c.set("experiment", "seed", std::to_string(seed));
    c.set("experiment", "output_dir", output_dir);

    c.set("data", "source", source);
    c.set("data", "preset", preset);
    c.set("data", "path", csv_path);
    c.set("data", "label_column", csv.label_column);
    c.set("data", "columns", join(csv.columns));
    if (csv.first_n) c.set("data", "first_n", std::to_string(*csv.first_n));

    c.set("split", "train_ratio", format_double(train_ratio));
    if (test_counts) c.set("split", "test_counts", join(std::vector<std::size_t>{(*test_counts)[0], (*test_counts)[1]}));
    c.set("flip", "counts", join(std::vector<std::size_t>{flip_counts[0], flip_counts[1]}));
    c.set("preprocess", "standardize", standardize ? "true" : "false");

    c.set("augment", "method", method_name(augment.method));
    c.set("augment", "k", std::to_string(augment.k));
    c.set("augment", "minority_label", std::to_string(augment.minority_label));
    c.set("augment", "n_new", n_new ? std::to_string(*n_new) : "balance");

    c.set("score_net", "layers", join(score_net.layer_sizes));
    c.set("score_net", "learning_rate", format_double(score_net.learning_rate));
    c.set("score_net", "epochs", std::to_string(score_net.epochs));
    c.set("score_net", "batch_size", std::to_string(score_net.batch_size));
    c.set("score_net", "objective", score_net.objective == Objective::ScoreMatching ? "sm" : "ssm");
    c.set("score_net", "n_slices", std::to_string(score_net.n_slices));
    c.set("score_net", "slice_distribution",
          score_net.slice_distribution == SliceDistribution::Gaussian ? "gaussian" : "rademacher");
    c.set("score_net", "plateau_patience", std::to_string(score_net.plateau_patience));
    c.set("score_net", "plateau_tolerance", format_double(score_net.plateau_tolerance));

    c.set("langevin", "step", format_double(langevin.step));
    c.set("langevin", "length", std::to_string(langevin.length));
    c.set("langevin", "discard_rate", format_double(langevin.discard_rate));
    c.set("langevin", "start_policy", langevin.start_policy == StartPolicy::Uniform ? "uniform" : "score-weighted");

    c.set("classifier", "kind", classifier_name(classifier.kind));
    c.set("classifier", "k", std::to_string(classifier.vote.k));
    c.set("classifier", "radius", format_double(classifier.vote.radius));
    c.set("classifier", "hidden", join(classifier.mlp.hidden));
    c.set("classifier", "epochs", std::to_string(classifier.mlp.epochs));
    c.set("classifier", "learning_rate", format_double(classifier.mlp.learning_rate));
    c.set("classifier", "momentum", format_double(classifier.mlp.momentum));
    c.set("classifier", "batch_size", std::to_string(classifier.mlp.batch_size));
    c.set("classifier", "logistic_epochs", std::to_string(classifier.logistic.epochs));
    c.set("classifier", "threshold", format_double(classifier.threshold));

    c.set("density", "lo", format_double(grid_lo));
    c.set("density", "hi", format_double(grid_hi));
    c.set("density", "points", std::to_string(grid_points));
    c.set("density", "points_per_segment", std::to_string(points_per_segment));
    return c;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult res;
    const fs::path dir = spec.output_dir;
    stage("prepare", [&] { fs::create_directories(dir); });
    Writer w{dir, &res};
    if (spec.pipeline == Pipeline::Classify)
        run_classify(spec, res, w);
    else
        run_density(spec, res, w);

    stage("write", [&] {
        Config results;
        for (const auto& [k, v] : res.metrics) results.set("results", k, format_double(v));
        std::ostringstream mt;
        mt << results.str();
        w.file("metrics.ini", mt.str());

        Config manifest = spec.to_config();
        manifest.set("build", "version", kVersion);
        manifest.set("build", "isa", std::string(simd::isa_name(simd::active_isa())));
        for (const auto& [k, v] : res.metrics) manifest.set("results", k, format_double(v));
        if (auto h = res.manifest.find("results", "test_features_hash")) manifest.set("results", "test_features_hash", *h);
        for (const auto& [f, h] : res.outputs) manifest.set("outputs", f, h);
        res.manifest = manifest;
        res.manifest_path = (dir / "manifest.ini").string();
        std::ofstream out(res.manifest_path);
        if (!out) throw InvalidArgument("cannot write " + res.manifest_path);
        out << "# scorelab experiment manifest\n" << manifest.str();
    });
    return res;
}

ExperimentSpec spec_from_manifest(const std::string& manifest_path) {
    Config cfg = Config::load(manifest_path);
    for (const char* s : {"results", "outputs", "build"}) cfg.erase_section(s);
    return ExperimentSpec::from_config(cfg);
}

std::vector<std::string> preset_names() {
    return {"1d-gaussian-recon",
            "synthetic-imbalanced-baseline",
            "synthetic-imbalanced-smote",
            "synthetic-imbalanced-adasyn",
            "synthetic-imbalanced-score-case1",
            "synthetic-imbalanced-score-case2",
            "synthetic-imbalanced-score-case3"};
}

ExperimentSpec preset_spec(const std::string& name) {
    ExperimentSpec s;
    s.name = name;
    s.output_dir = "out/" + name;
    if (name == "1d-gaussian-recon") {
        s.pipeline = Pipeline::DensityRecon1d;
        s.preset = "gauss1d";
        s.score_net.layer_sizes = {1, 128, 256, 128, 1};
        // Longer runs overfit: the score-matching loss keeps falling while the
        // reconstructed mass drifts well above 1.
        s.score_net.learning_rate = 0.003;
        s.score_net.epochs = 400;
        s.score_net.batch_size = 100;
        return s;
    }
    const std::string prefix = "synthetic-imbalanced-";
    if (name.rfind(prefix, 0) != 0) throw InvalidArgument("unknown preset '" + name + "'");
    const std::string variant = name.substr(prefix.size());
    s.preset = "imbalanced10d";
    // 2259 train rows (128 positive) and 741 test rows (42 positive).
    s.test_counts = std::array<std::size_t, 2>{699, 42};
    s.classifier.kind = ClassifierKind::Knn;
    s.classifier.vote.k = 5;
    s.score_net.layer_sizes = {10, 10};
    s.score_net.learning_rate = 0.01;
    s.score_net.epochs = 2000;
    s.langevin.start_policy = StartPolicy::Uniform;
    if (variant == "baseline") {
        s.augment.method = AugmentMethod::None;
    } else if (variant == "smote") {
        s.augment.method = AugmentMethod::Smote;
    } else if (variant == "adasyn") {
        s.augment.method = AugmentMethod::Adasyn;
    } else if (variant == "score-case1" || variant == "score-case2" || variant == "score-case3") {
        s.augment.method = AugmentMethod::Score;
        const char v = variant.back();
        s.langevin.length = v == '1' ? 10 : v == '2' ? 20 : 40;
        s.langevin.discard_rate = v == '1' ? 0.2 : 0.9;
        s.langevin.step = v == '3' ? 0.0005 : 0.01;
    } else {
        throw InvalidArgument("unknown preset '" + name + "'");
    }
    return s;
}

}  // namespace scorelab
