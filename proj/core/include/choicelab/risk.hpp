/// Synthetic supervised data and the risk profiles built from it.
///
/// Hypotheses are fixed predictors (affine maps or lookup tables), never
/// trained models: the aggregation machinery only consumes risk values per
/// (environment, hypothesis), and fixed predictors keep every number
/// reproducible by a hand loop. Datasets come from seeded generators and
/// regenerate bit-identically from (spec, seed).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choicelab/core.hpp"

namespace choicelab::risk {

// ---------------------------------------------------------------------------
// Losses and regularizers
// ---------------------------------------------------------------------------

enum class LossKind { cross_entropy, hinge, square, absolute };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

struct LossSpec {
    LossKind kind = LossKind::square;
    /// Class count, cross-entropy only (predictions are probability vectors
    /// of this length).
    int classes = 0;
};

enum class PenaltyKind { identity, square };

std::string to_string(PenaltyKind k);
PenaltyKind penalty_kind_from_string(const std::string& s);

/// lambda * omega(norm) added to the mean loss; omega is nondecreasing on
/// nonnegative inputs.
struct RegularizerSpec {
    PenaltyKind omega = PenaltyKind::identity;
    double lambda = 0.0;
};

/// lambda * omega(norm). Requires lambda >= 0 and norm >= 0.
double penalty(const RegularizerSpec& reg, double norm);

/// Scalar losses: hinge max(0, 1 - y * h(x)) with labels in {-1, +1};
/// square (y - h(x))^2; absolute |y - h(x)|.
double loss_eval(const LossSpec& spec, double prediction, double label);

/// Cross-entropy -log p[label] against a one-hot target. The prediction must
/// be a probability vector of length spec.classes: nonnegative entries
/// summing to 1 within 1e-9, with positive mass on the true class (a
/// certain miss has infinite loss and is rejected).
double loss_eval(const LossSpec& spec, const std::vector<double>& prediction, int label);

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// real: regression target. binary: {-1, +1}, the hinge convention.
/// class_index: integer in 0..K-1 for cross-entropy.
enum class LabelKind { real, binary, class_index };

std::string to_string(LabelKind k);
LabelKind label_kind_from_string(const std::string& s);

struct Example {
    std::vector<double> x;
    double y = 0.0;
};

struct SyntheticDataset {
    std::vector<Example> examples;
    LabelKind label_kind = LabelKind::real;
    /// Generator entry, base seed and environment index when machine
    /// generated; empty object for handmade data.
    json provenance = json::object();

    int dim() const;
    /// Nonempty, homogeneous input dimension, labels matching label_kind.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Hypotheses
// ---------------------------------------------------------------------------

/// A fixed predictor. Affine: w . x + b. Table: piecewise constant in x[0]
/// with ascending cuts; cell i applies when x[0] < cuts[i], the last cell
/// catches the rest, so the predictor is total on any input. Table cells are
/// vectors so a cell can hold a probability vector for cross-entropy;
/// scalar predictions read component 0.
struct TabularHypothesis {
    enum class Form { affine, table };

    std::string id;
    Form form = Form::affine;

    std::vector<double> weights;
    double intercept = 0.0;

    std::vector<double> cuts;
    std::vector<std::vector<double>> values;

    /// Explicit norm attribute consumed by the regularizer.
    double norm = 0.0;

    double predict(const std::vector<double>& x) const;
    std::vector<double> predict_vector(const std::vector<double>& x) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Risk and profiles
// ---------------------------------------------------------------------------

/// Mean loss over the dataset plus penalty(reg, h.norm). lambda = 0 gives the
/// plain empirical risk.
double empirical_risk(const TabularHypothesis& h, const SyntheticDataset& d,
                      const LossSpec& loss, const RegularizerSpec& reg = {});

/// Entry (i, h) = empirical_risk(hyps[h], envs[i], loss, reg).
RiskProfile build_profile_multisource(const std::vector<TabularHypothesis>& hyps,
                                      const std::vector<SyntheticDataset>& envs,
                                      const LossSpec& loss, const RegularizerSpec& reg = {});

/// Each example becomes its own single-example environment, in order. Feeding
/// the result to build_profile_multisource yields the per-example profile
/// (environment count = sample size).
std::vector<SyntheticDataset> split_per_example(const SyntheticDataset& d);

/// Alternatives are whole n-tuples of hypotheses, one component per
/// environment. Entry (i, t) = plain empirical risk of tuples[t][i] on
/// envs[i]: row i depends on component i alone.
RiskProfile build_profile_block(const std::vector<std::vector<TabularHypothesis>>& tuples,
                                const std::vector<SyntheticDataset>& envs,
                                const LossSpec& loss);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// One environment's data distribution. linear_gaussian: x ~ N(0, I),
/// y = w . x + intercept + noise * N(0, 1), real labels. label_flip:
/// x ~ N(0, I), y = sign(w . x + intercept) flipped with probability
/// flip_rate, labels in {-1, +1}. The stream is the environment's seed
/// part: entries with equal parameters and equal streams generate
/// identical data; give entries distinct streams for independent draws.
struct EnvGenerator {
    std::string kind;
    std::vector<double> weights;
    double intercept = 0.0;
    double noise = 0.0;
    double flip_rate = 0.0;
    int examples = 0;
    std::uint64_t stream = 0;

    void validate() const;
};

/// Full generation recipe. Hypotheses, loss and regularizer ride along so a
/// single spec file describes a whole profile build.
struct GeneratorSpec {
    std::vector<EnvGenerator> environments;
    std::vector<TabularHypothesis> hypotheses;
    LossSpec loss;
    RegularizerSpec regularizer;
    std::optional<std::uint64_t> seed;

    void validate() const;
};

/// One dataset per environment, drawn from the stream mix(seed, stream), so
/// each dataset is insensitive to the other generator entries and
/// regeneration is bit-identical.
std::vector<SyntheticDataset> synth_generate(const GeneratorSpec& spec, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json to_json(const LossSpec& s);
LossSpec loss_spec_from_json(const json& j);

json to_json(const RegularizerSpec& s);
RegularizerSpec regularizer_from_json(const json& j);

json to_json(const TabularHypothesis& h);
TabularHypothesis hypothesis_from_json(const json& j);

json to_json(const EnvGenerator& g);
EnvGenerator env_generator_from_json(const json& j);

json to_json(const GeneratorSpec& s);
GeneratorSpec generator_spec_from_json(const json& j);

json to_json(const SyntheticDataset& d);
SyntheticDataset dataset_from_json(const json& j);

}  // namespace choicelab::risk
