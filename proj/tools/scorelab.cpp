#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "scorelab/augment.hpp"
#include "scorelab/classify.hpp"
#include "scorelab/data_io.hpp"
#include "scorelab/density.hpp"
#include "scorelab/errors.hpp"
#include "scorelab/experiment.hpp"
#include "scorelab/gaussian.hpp"
#include "scorelab/langevin.hpp"
#include "scorelab/metrics.hpp"
#include "scorelab/score_net.hpp"

using namespace scorelab;

namespace {


std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    return out;
}

Matrix rows_of(const LabeledDataset& d, int cls) { return cls < 0 ? d.features : d.class_rows(cls); }

void write_matrix_csv(const Matrix& m, std::ostream& out) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << 'x' << j;
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
}

void print_metrics(const ConfusionMatrix& cm) {
    const Metrics m = metrics(cm);
    std::cout << "tn = " << cm.tn << "\nfp = " << cm.fp << "\nfn = " << cm.fn << "\ntp = " << cm.tp << '\n'
              << "recall = " << format_double(m.recall) << "\nprecision = " << format_double(m.precision)
              << "\nf1 = " << format_double(m.f1) << "\naccuracy = " << format_double(m.accuracy)
              << "\nmistakes = " << m.mistakes << "\ndegenerate = " << (m.degenerate ? "true" : "false") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scorelab: score-function density estimation, sampling and classification"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Draw a labelled dataset from a built-in generating process");
    std::string sim_preset = "gauss2d", sim_out;
    std::uint64_t sim_seed = 42;
    double sim_noise = -1.0;
    sim->add_option("--preset", sim_preset, "gauss1d | gauss2d | imbalanced10d")->capture_default_str();
    sim->add_option("--seed", sim_seed)->capture_default_str();
    sim->add_option("--noise-rate", sim_noise, "Overall label-flip rate (overrides the preset)");
    sim->add_option("-o,--out", sim_out, "Output CSV")->required();

    // train-score
    auto* ts = app.add_subcommand("train-score", "Fit a score network to one class of a CSV dataset");
    std::string ts_data, ts_out, ts_label = "Class", ts_objective = "sm";
    int ts_class = 1;
    std::vector<std::size_t> ts_layers;
    TrainConfig tc;
    ts->add_option("--data", ts_data, "Input CSV")->required();
    ts->add_option("--label-column", ts_label)->capture_default_str();
    ts->add_option("--class", ts_class, "Class to fit (-1 = all rows)")->capture_default_str();
    ts->add_option("--layers", ts_layers, "Layer sizes, e.g. 2,64,64,2 (default: affine d,d)")->delimiter(',');
    ts->add_option("--lr", tc.learning_rate)->capture_default_str();
    ts->add_option("--epochs", tc.epochs)->capture_default_str();
    ts->add_option("--batch", tc.batch_size, "Minibatch size (0 = full batch)")->capture_default_str();
    ts->add_option("--objective", ts_objective, "sm | ssm")->capture_default_str();
    ts->add_option("--slices", tc.n_slices)->capture_default_str();
    ts->add_option("--seed", tc.seed)->capture_default_str();
    ts->add_option("-o,--out", ts_out, "Model file")->required();

    // sample
    auto* sa = app.add_subcommand("sample", "Generate Langevin samples from a score model");
    std::string sa_model, sa_seeds, sa_out, sa_label = "Class", sa_policy = "score-weighted";
    int sa_class = 1;
    std::size_t sa_count = 0;
    LangevinConfig lc;
    sa->add_option("--model", sa_model)->required();
    sa->add_option("--seeds", sa_seeds, "CSV of start points (labelled)")->required();
    sa->add_option("--label-column", sa_label)->capture_default_str();
    sa->add_option("--class", sa_class, "Seed rows of this class (-1 = all)")->capture_default_str();
    sa->add_option("--step", lc.step)->capture_default_str();
    sa->add_option("--length", lc.length)->capture_default_str();
    sa->add_option("--discard", lc.discard_rate)->capture_default_str();
    sa->add_option("--chains", lc.n_chains)->capture_default_str();
    sa->add_option("--count", sa_count, "Exact number of kept samples (overrides --chains)");
    sa->add_option("--start-policy", sa_policy, "score-weighted | uniform")->capture_default_str();
    sa->add_option("--seed", lc.seed)->capture_default_str();
    sa->add_option("-o,--out", sa_out)->required();

    // density
    auto* de = app.add_subcommand("density", "Reconstruct a density on a grid by integrating a score model");
    std::string de_model, de_out, de_data, de_label = "Class";
    std::vector<double> de_lo, de_hi, de_anchor;
    std::vector<std::size_t> de_points;
    double de_p0 = 0.0;
    int de_class = 1;
    std::size_t de_pps = 2;
    de->add_option("--model", de_model)->required();
    de->add_option("--lo", de_lo)->delimiter(',')->required();
    de->add_option("--hi", de_hi)->delimiter(',')->required();
    de->add_option("--points", de_points, "Grid nodes per axis")->delimiter(',')->required();
    de->add_option("--anchor", de_anchor, "Anchor point x0")->delimiter(',');
    de->add_option("--p0", de_p0, "Density at the anchor");
    de->add_option("--from-data", de_data, "Estimate the anchor from a CSV (Gaussian peak at the sample mean)");
    de->add_option("--label-column", de_label)->capture_default_str();
    de->add_option("--class", de_class)->capture_default_str();
    de->add_option("--points-per-segment", de_pps)->capture_default_str();
    de->add_option("-o,--out", de_out)->required();

    // boundary
    auto* bo = app.add_subcommand("boundary", "Newton-Raphson boundary between two linear score models");
    std::string bo_m0, bo_m1, bo_data, bo_label = "Class";
    std::vector<double> bo_init;
    NewtonOptions nopt;
    bo->add_option("--model0", bo_m0)->required();
    bo->add_option("--model1", bo_m1)->required();
    bo->add_option("--data", bo_data, "Labelled CSV for the sample moments")->required();
    bo->add_option("--label-column", bo_label)->capture_default_str();
    bo->add_option("--init", bo_init)->delimiter(',')->required();
    bo->add_option("--tol", nopt.tolerance)->capture_default_str();
    bo->add_option("--max-iter", nopt.max_iter)->capture_default_str();

    // classify
    auto* cl = app.add_subcommand("classify", "Label test points");
    std::string cl_train, cl_test, cl_out, cl_method = "knn", cl_label = "Class", cl_m0, cl_m1;
    VoteConfig vc;
    MlpClassifierConfig mc;
    std::size_t cl_line_points = 200;
    std::vector<double> cl_priors;
    cl->add_option("--train", cl_train)->required();
    cl->add_option("--test", cl_test)->required();
    cl->add_option("--label-column", cl_label)->capture_default_str();
    cl->add_option("--method", cl_method, "knn | radius | mlp | logistic | contrast | generative")->capture_default_str();
    cl->add_option("--k", vc.k)->capture_default_str();
    cl->add_option("--radius", vc.radius)->capture_default_str();
    cl->add_option("--hidden", mc.hidden)->delimiter(',');
    cl->add_option("--epochs", mc.epochs)->capture_default_str();
    cl->add_option("--seed", mc.seed)->capture_default_str();
    cl->add_option("--model0", cl_m0, "Class-0 score model (contrast, generative)");
    cl->add_option("--model1", cl_m1, "Class-1 score model (contrast, generative)");
    cl->add_option("--priors", cl_priors, "p(y=0),p(y=1); default empirical")->delimiter(',');
    cl->add_option("--line-points", cl_line_points)->capture_default_str();
    cl->add_option("-o,--out", cl_out, "Predictions CSV")->required();

    // augment
    auto* au = app.add_subcommand("augment", "Oversample the minority class");
    std::string au_data, au_out, au_label = "Class", au_method = "smote", au_policy = "score-weighted";
    AugmentPlan plan;
    std::vector<std::size_t> au_layers;
    std::size_t au_n_new = 0;
    bool au_balance = false;
    au->add_option("--data", au_data)->required();
    au->add_option("--label-column", au_label)->capture_default_str();
    au->add_option("--method", au_method, "smote | adasyn | score")->capture_default_str();
    au->add_option("--k", plan.k)->capture_default_str();
    au->add_option("--n-new", au_n_new);
    au->add_flag("--balance", au_balance, "Generate until the classes are equal");
    au->add_option("--minority", plan.minority_label)->capture_default_str();
    au->add_option("--seed", plan.seed)->capture_default_str();
    au->add_option("--layers", au_layers)->delimiter(',');
    au->add_option("--lr", plan.train.learning_rate)->capture_default_str();
    au->add_option("--epochs", plan.train.epochs)->capture_default_str();
    au->add_option("--step", plan.langevin.step)->capture_default_str();
    au->add_option("--length", plan.langevin.length)->capture_default_str();
    au->add_option("--discard", plan.langevin.discard_rate)->capture_default_str();
    au->add_option("--start-policy", au_policy)->capture_default_str();
    au->add_option("-o,--out", au_out)->required();

    // eval
    auto* ev = app.add_subcommand("eval", "Confusion matrix and metrics");
    std::string ev_pred;
    std::vector<std::size_t> ev_counts;
    ev->add_option("--predictions", ev_pred, "CSV with label and predicted columns");
    ev->add_option("--counts", ev_counts, "tn,fp,fn,tp")->delimiter(',');

    // run
    auto* ru = app.add_subcommand("run", "Run an experiment from a spec file or a built-in preset");
    std::string ru_spec, ru_preset, ru_out;
    bool ru_list = false;
    ru->add_option("spec", ru_spec, "Spec (.ini) or manifest file");
    ru->add_option("--preset", ru_preset);
    ru->add_option("--output-dir", ru_out, "Override the spec's output directory");
    ru->add_flag("--list-presets", ru_list);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            DgpSpec dgp = sim_preset == "gauss1d" ? gauss1d_dgp(sim_seed)
                        : sim_preset == "gauss2d" ? gauss2d_dgp(sim_seed)
                        : sim_preset == "imbalanced10d"
                            ? imbalanced10d_dgp(sim_seed)
                            : throw InvalidArgument("unknown preset '" + sim_preset + "'");
            if (sim_noise >= 0.0) {
                dgp.noise_rate = sim_noise;
                dgp.noise_scope = NoiseScope::Overall;
            }
            const LabeledDataset d = simulate(dgp);
            save_csv(d, sim_out);
            std::cout << "wrote " << d.size() << " rows (" << d.count(0) << " negative, " << d.count(1)
                      << " positive, " << d.flipped.size() << " flipped) to " << sim_out << '\n';
        } else if (*ts) {
            CsvOptions opt;
            opt.label_column = ts_label;
            const Matrix rows = rows_of(load_csv(ts_data, opt), ts_class);
            tc.layer_sizes = ts_layers.empty() ? std::vector<std::size_t>{rows.cols(), rows.cols()} : ts_layers;
            if (ts_objective != "sm" && ts_objective != "ssm") throw InvalidArgument("objective must be sm or ssm");
            tc.objective = ts_objective == "sm" ? Objective::ScoreMatching : Objective::SlicedScoreMatching;
            const TrainResult r = train(rows, tc);
            save_model(r.net, ts_out);
            std::cout << "trained on " << rows.rows() << " rows for " << r.epochs_run << " epochs, final loss "
                      << format_double(r.loss_history.back()) << '\n';
        } else if (*sa) {
            CsvOptions opt;
            opt.label_column = sa_label;
            const Matrix seeds = rows_of(load_csv(sa_seeds, opt), sa_class);
            if (sa_count) lc.target_count = sa_count;
            lc.start_policy = sa_policy == "uniform" ? StartPolicy::Uniform : StartPolicy::ScoreWeighted;
            const LangevinResult r = generate(ScoreField::from_net(load_model(sa_model)), seeds, lc);
            for (const auto& l : r.log) std::cerr << l << '\n';
            auto out = open_out(sa_out);
            write_matrix_csv(r.samples, out);
            std::cout << "wrote " << r.samples.rows() << " samples from " << r.chains_run << " chains\n";
        } else if (*de) {
            const ScoreNet net = load_model(de_model);
            Vector anchor = de_anchor;
            double p0 = de_p0;
            if (!de_data.empty()) {
                CsvOptions opt;
                opt.label_column = de_label;
                const InitialDensity init =
                    initial_density(rows_of(load_csv(de_data, opt), de_class), InitialDensityMethod::GaussianCentral);
                anchor = init.x0;
                p0 = init.p0;
            }
            if (anchor.empty() || !(p0 > 0.0)) throw InvalidArgument("need --anchor and --p0, or --from-data");
            const Grid grid = Grid::uniform(de_lo, de_hi, de_points);
            DensitySettings ds;
            ds.points_per_segment = de_pps;
            const DensityField f = construct_density(ScoreField::from_net(net), anchor, p0, grid, ds);
            for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
            auto out = open_out(de_out);
            write_density_csv(f, out);
            std::cout << "grid mass " << format_double(f.mass()) << '\n';
        } else if (*bo) {
            CsvOptions opt;
            opt.label_column = bo_label;
            const LabeledDataset d = load_csv(bo_data, opt);
            const auto c0 = GaussianAssumedDensity::from_linear_net(load_model(bo_m0), d.class_rows(0));
            const auto c1 = GaussianAssumedDensity::from_linear_net(load_model(bo_m1), d.class_rows(1));
            const Vector x = newton_raphson_boundary(generative_boundary_fn(c0, c1), generative_boundary_grad(c0, c1),
                                                     bo_init, nopt);
            for (std::size_t i = 0; i < x.size(); ++i) std::cout << (i ? "," : "") << format_double(x[i]);
            std::cout << '\n';
        } else if (*cl) {
            CsvOptions opt;
            opt.label_column = cl_label;
            const LabeledDataset train_set = load_csv(cl_train, opt);
            const LabeledDataset test_set = load_csv(cl_test, opt);
            std::vector<Prediction> preds(test_set.size());
            if (cl_method == "knn" || cl_method == "radius") {
                vc.mode = cl_method == "knn" ? VoteMode::FixedK : VoteMode::FixedRadius;
                preds = vote_classify(train_set, test_set.features, vc);
            } else if (cl_method == "mlp") {
                const MlpClassifier m = MlpClassifier::fit(train_set, mc);
                for (std::size_t i = 0; i < test_set.size(); ++i) {
                    const double p = m.prob1(test_set.features.row(i));
                    preds[i] = {p >= 0.5 ? 1 : 0, p};
                }
            } else if (cl_method == "logistic") {
                const LogisticFit f = logistic_fit(train_set);
                for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
                for (std::size_t i = 0; i < test_set.size(); ++i) {
                    const double p = f.model.prob1(test_set.features.row(i));
                    preds[i] = {p >= 0.5 ? 1 : 0, p};
                }
            } else if (cl_method == "contrast" || cl_method == "generative") {
                if (cl_m0.empty() || cl_m1.empty()) throw InvalidArgument("--model0 and --model1 are required");
                const std::array<ScoreField, 2> fields{ScoreField::from_net(load_model(cl_m0)),
                                                      ScoreField::from_net(load_model(cl_m1))};
                DecisionConfig dc;
                if (!cl_priors.empty()) {
                    if (cl_priors.size() != 2) throw InvalidArgument("--priors needs two values");
                    dc.priors = std::array<double, 2>{cl_priors[0], cl_priors[1]};
                }
                const auto priors = resolve_priors(dc, &train_set);
                std::array<Anchor, 2> anchors;
                for (int c = 0; c < 2; ++c) {
                    const InitialDensity init =
                        initial_density(train_set.class_rows(c), InitialDensityMethod::GaussianCentral);
                    anchors[c] = {init.x0, init.p0};
                }
                for (std::size_t i = 0; i < test_set.size(); ++i) {
                    const auto x = test_set.features.row(i);
                    if (cl_method == "contrast") {
                        preds[i] = pseudo_pdf_contrast(fields[0], fields[1], x);
                    } else {
                        const auto g = generative_classify(fields, anchors, priors, x, cl_line_points);
                        preds[i] = {g.label, g.posterior[static_cast<std::size_t>(g.label)]};
                    }
                }
            } else {
                throw InvalidArgument("unknown method '" + cl_method + "'");
            }
            auto out = open_out(cl_out);
            write_predictions_csv(test_set.features, preds, out);
            std::vector<int> labels;
            for (const auto& p : preds) labels.push_back(p.label);
            print_metrics(confusion(test_set.labels, labels));
        } else if (*au) {
            CsvOptions opt;
            opt.label_column = au_label;
            const LabeledDataset d = load_csv(au_data, opt);
            plan.method = parse_augment_method(au_method);
            plan.train.layer_sizes = au_layers;
            plan.langevin.start_policy = au_policy == "uniform" ? StartPolicy::Uniform : StartPolicy::ScoreWeighted;
            const std::size_t minority = d.count(plan.minority_label), majority = d.count(1 - plan.minority_label);
            plan.n_new = au_balance ? (majority > minority ? majority - minority : 0) : au_n_new;
            const AugmentResult r = augment(d, plan);
            for (const auto& l : r.log) std::cerr << l << '\n';
            save_csv(r.data, au_out, au_label, true);
            std::cout << "wrote " << r.data.size() << " rows to " << au_out << '\n';
        } else if (*ev) {
            ConfusionMatrix cm;
            if (ev_counts.size() == 4) {
                cm = {ev_counts[0], ev_counts[1], ev_counts[2], ev_counts[3]};
            } else if (!ev_pred.empty()) {
                std::ifstream in(ev_pred);
                if (!in) throw InvalidArgument("cannot open " + ev_pred);
                std::string line;
                std::getline(in, line);
                std::vector<std::string> header;
                {
                    std::istringstream hs(line);
                    std::string h;
                    while (std::getline(hs, h, ',')) header.push_back(h);
                }
                const auto col = [&](const std::string& name) {
                    const auto it = std::find(header.begin(), header.end(), name);
                    if (it == header.end()) throw ParseError("column '" + name + "' not found", 1, 0);
                    return static_cast<std::size_t>(it - header.begin());
                };
                const std::size_t lc_col = col("label");
                const std::size_t pc_col = std::find(header.begin(), header.end(), "predicted") != header.end()
                                               ? col("predicted")
                                               : lc_col;
                if (pc_col == lc_col) throw ParseError("need both label and predicted columns", 1, 0);
                std::vector<int> truth, pred;
                while (std::getline(in, line)) {
                    std::vector<std::string> cells;
                    std::istringstream ls(line);
                    std::string c;
                    while (std::getline(ls, c, ',')) cells.push_back(c);
                    truth.push_back(std::stoi(cells.at(lc_col)));
                    pred.push_back(std::stoi(cells.at(pc_col)));
                }
                cm = confusion(truth, pred);
            } else {
                throw InvalidArgument("give --predictions or --counts");
            }
            print_metrics(cm);
        } else if (*ru) {
            if (ru_list) {
                for (const auto& n : preset_names()) std::cout << n << '\n';
                return 0;
            }
            ExperimentSpec spec;
            if (!ru_preset.empty())
                spec = preset_spec(ru_preset);
            else if (!ru_spec.empty())
                spec = spec_from_manifest(ru_spec);
            else
                throw InvalidArgument("give a spec file or --preset");
            if (!ru_out.empty()) spec.output_dir = ru_out;
            const ExperimentResult r = run_experiment(spec);
            for (const auto& l : r.log) std::cerr << l << '\n';
            for (const auto& [k, v] : r.metrics) std::cout << k << " = " << format_double(v) << '\n';
            std::cout << "manifest: " << r.manifest_path << '\n';
        }
    } catch (const StageError& e) {
        std::cerr << "error in stage '" << e.stage() << "': " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
