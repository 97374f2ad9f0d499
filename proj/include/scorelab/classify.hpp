#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scorelab/dataset.hpp"
#include "scorelab/density.hpp"
#include "scorelab/langevin.hpp"
#include "scorelab/matrix.hpp"
#include "scorelab/score_net.hpp"

namespace scorelab {

// ---- decision rules -------------------------------------------------------

enum class DecisionRule { AbsoluteGap, LogRatio };

struct DecisionConfig {
    double margin = 0.0;  // soft margin gamma_0 >= 0
    DecisionRule rule = DecisionRule::AbsoluteGap;
    // Class priors (p(y=0), p(y=1)). Unset means empirical class frequencies.
    std::optional<std::array<double, 2>> priors;

    void validate() const;
};

// Priors from the config, or the class frequencies of `train` when unset.
std::array<double, 2> resolve_priors(const DecisionConfig& cfg, const LabeledDataset* train);

// p(y_j | x) proportional to p(x | y_j) p(y_j). Throws InvalidArgument when every
// weighted density is zero.
Vector generative_posterior(std::span<const double> densities, std::span<const double> priors);

// AbsoluteGap: 1 iff p1 - p0 >= margin. LogRatio: 1 iff log(p1 / p0) >= margin,
// with p0 = 0 giving 1 whenever p1 > 0. Equality goes to label 1.
int decide_binary(double p1, double p0, const DecisionConfig& cfg);

// ---- boundary search -------------------------------------------------------

struct NewtonOptions {
    double tolerance = 1e-10;
    std::size_t max_iter = 100;
};

using ScalarFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<Vector(std::span<const double>)>;

// Root of fn by Newton-Raphson. In more than one dimension each step is the
// scalar Newton step along the current gradient: x -= fn(x) g / |g|^2.
// Returns a point with |fn| < tolerance; throws ConvergenceError with the last
// residual on max_iter or on a vanishing gradient.
Vector newton_raphson_boundary(const ScalarFn& fn, const GradientFn& grad, std::span<const double> x_init,
                               const NewtonOptions& opt = {});

// Log density of a class under the Gaussian assumption, built from a learned
// linear score s(x) = A x + b and sample moments:
//   f(x) = -1/2 x^T A x - b^T x + 1/2 mu^T A mu + b^T mu,  log p = -f - log Z,
//   Z = (2 pi)^{d/2} |Sigma|^{1/2}.
struct GaussianAssumedDensity {
    Matrix a;
    Vector b;
    Vector mean;
    double log_normalizer = 0.0;

    static GaussianAssumedDensity from_linear_net(const ScoreNet& net, const Matrix& samples);
    double energy(std::span<const double> x) const;  // f(x)
    double log_density(std::span<const double> x) const { return -energy(x) - log_normalizer; }
    Vector score(std::span<const double> x) const;
};

// log p1(x) - log p0(x) and its gradient s1 - s0 for the Gaussian-assumption pathway.
ScalarFn generative_boundary_fn(const GaussianAssumedDensity& c0, const GaussianAssumedDensity& c1);
GradientFn generative_boundary_grad(const GaussianAssumedDensity& c0, const GaussianAssumedDensity& c1);

// ---- discriminative densities ----------------------------------------------

// Binary discriminative densities p(y=j|x) = exp(-f_j) / (exp(-f_0) + exp(-f_1)).
struct DiscriminativeFields {
    Vector s0, s1;          // scores of p(y=0|x) and p(y=1|x)
    Vector grad_p0, grad_p1;
};
DiscriminativeFields discriminative_score_fields(double f0, std::span<const double> grad_f0, double f1,
                                                 std::span<const double> grad_f1);

// ---- logistic regression ---------------------------------------------------

// p(y=1|x) = sigmoid(theta^T [1, x]); intercept first.
struct LogisticModel {
    Vector theta;

    std::size_t dim() const { return theta.empty() ? 0 : theta.size() - 1; }
    Vector slope() const { return Vector(theta.begin() + 1, theta.end()); }
    double logit(std::span<const double> x) const;
    double prob1(std::span<const double> x) const;
    // Discriminative fields with f_0 = theta^T x and f_1 = 0.
    DiscriminativeFields fields(std::span<const double> x) const;
};

struct LogisticConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 20000;
    double tolerance = 1e-9;  // stop once |gradient| falls below
    double max_norm = 1e3;    // |theta| cap, reached only on separable data
};

struct LogisticFit {
    LogisticModel model;
    std::size_t epochs_run = 0;
    std::vector<std::string> warnings;
};

// Full-batch gradient ascent on the mean log-likelihood.
LogisticFit logistic_fit(const LabeledDataset& data, const LogisticConfig& cfg = {});

// ---- voting and contrast ---------------------------------------------------

struct Prediction {
    int label = -1;  // -1 = abstain
    double confidence = 0.0;
};

enum class VoteMode { FixedRadius, FixedK };

struct VoteConfig {
    VoteMode mode = VoteMode::FixedK;
    double radius = 1.0;
    std::size_t k = 5;
};

// Majority label among the k nearest training rows or inside the radius ball
// (Euclidean). Ties go to label 0; an empty ball abstains.
Prediction vote_classify(const LabeledDataset& train, std::span<const double> x, const VoteConfig& cfg);
std::vector<Prediction> vote_classify(const LabeledDataset& train, const Matrix& queries, const VoteConfig& cfg);

// Writes "x0,...,x{d-1},label,confidence" rows; label -1 marks an abstention.
void write_predictions_csv(const Matrix& x, const std::vector<Prediction>& predictions, std::ostream& out);

// Labels x by the larger 1 / (|s_c(x)| + eta). A rough heuristic: inverse score
// norm is only loosely related to density. Ties go to label 0.
Prediction pseudo_pdf_contrast(const ScoreField& field0, const ScoreField& field1, std::span<const double> x,
                               double eta = kMinScoreNormFloor);

// ---- generative classification ---------------------------------------------

struct Anchor {
    Vector x0;
    double p0 = 0.0;
};

struct GenerativePrediction {
    int label = 0;
    std::array<double, 2> density{};
    std::array<double, 2> posterior{};
};

// Class densities at x by straight-line integration from each anchor, Bayes
// posteriors with the given priors, then decide_binary on the posteriors.
GenerativePrediction generative_classify(const std::array<ScoreField, 2>& fields, const std::array<Anchor, 2>& anchors,
                                         const std::array<double, 2>& priors, std::span<const double> x,
                                         std::size_t n_points = 200, const DecisionConfig& rule = {});

// ---- neural-network classifier backend -------------------------------------

struct MlpClassifierConfig {
    std::vector<std::size_t> hidden = {32, 32};
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::size_t epochs = 200;
    std::size_t batch_size = 64;
    std::uint64_t seed = 0;
};

// ReLU MLP with one logit output trained on binary cross-entropy by minibatch
// SGD with momentum. Predicts label 1 when p(y=1|x) >= threshold.
class MlpClassifier {
public:
    static MlpClassifier fit(const LabeledDataset& data, const MlpClassifierConfig& cfg);

    double prob1(std::span<const double> x) const;
    int predict(std::span<const double> x, double threshold = 0.5) const;
    std::vector<int> predict(const Matrix& x, double threshold = 0.5) const;
    const ScoreNet& network() const { return net_; }
    const std::vector<double>& loss_history() const { return loss_; }

private:
    ScoreNet net_;
    std::vector<double> loss_;
};

}  // namespace scorelab
