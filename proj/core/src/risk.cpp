/// @file risk.cpp
#include "choicelab/risk.hpp"

#include <algorithm>
#include <cmath>

namespace choicelab::risk {
namespace {

const json& require_field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string(what) + ": missing field '" + key + "'");
    return j.at(key);
}

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": value must be finite");
    return v;
}

std::vector<double> number_list(const json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array");
    std::vector<double> out;
    for (const auto& e : j) out.push_back(finite_number(e, what));
    return out;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": value must be finite");
}

double dot(const std::vector<double>& w, const std::vector<double>& x, const char* what) {
    if (w.size() != x.size())
        throw ValidationError(std::string(what) + ": input dimension " + std::to_string(x.size()) +
                              " does not match weight dimension " + std::to_string(w.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Losses and regularizers
// ---------------------------------------------------------------------------

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::cross_entropy: return "cross_entropy";
        case LossKind::hinge: return "hinge";
        case LossKind::square: return "square";
        case LossKind::absolute: return "absolute";
    }
    throw ValidationError("unknown loss kind");
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "cross_entropy") return LossKind::cross_entropy;
    if (s == "hinge") return LossKind::hinge;
    if (s == "square") return LossKind::square;
    if (s == "absolute") return LossKind::absolute;
    throw ValidationError("unknown loss kind '" + s + "'");
}

std::string to_string(PenaltyKind k) {
    switch (k) {
        case PenaltyKind::identity: return "identity";
        case PenaltyKind::square: return "square";
    }
    throw ValidationError("unknown penalty kind");
}

PenaltyKind penalty_kind_from_string(const std::string& s) {
    if (s == "identity") return PenaltyKind::identity;
    if (s == "square") return PenaltyKind::square;
    throw ValidationError("unknown penalty kind '" + s + "'");
}

double penalty(const RegularizerSpec& reg, double norm) {
    if (!(reg.lambda >= 0.0))
        throw ValidationError("penalty: regularization strength must be nonnegative");
    if (!(norm >= 0.0) || !std::isfinite(norm))
        throw ValidationError("penalty: hypothesis norm must be a finite nonnegative value");
    const double omega = reg.omega == PenaltyKind::identity ? norm : norm * norm;
    return reg.lambda * omega;
}

double loss_eval(const LossSpec& spec, double prediction, double label) {
    require_finite(prediction, "loss_eval: prediction");
    require_finite(label, "loss_eval: label");
    switch (spec.kind) {
        case LossKind::cross_entropy:
            throw ValidationError(
                "loss_eval: cross-entropy takes a probability vector, not a scalar");
        case LossKind::hinge:
            if (label != 1.0 && label != -1.0)
                throw ValidationError("loss_eval: hinge labels must be -1 or +1");
            return std::max(0.0, 1.0 - label * prediction);
        case LossKind::square: {
            const double d = label - prediction;
            return d * d;
        }
        case LossKind::absolute: return std::abs(label - prediction);
    }
    throw ValidationError("loss_eval: unknown loss kind");
}

double loss_eval(const LossSpec& spec, const std::vector<double>& prediction, int label) {
    if (spec.kind != LossKind::cross_entropy)
        throw ValidationError("loss_eval: vector predictions are for cross-entropy only");
    if (spec.classes < 2)
        throw ValidationError("loss_eval: cross-entropy needs a class count of at least 2");
    if (prediction.size() != static_cast<std::size_t>(spec.classes))
        throw ValidationError("loss_eval: prediction has " + std::to_string(prediction.size()) +
                              " entries for " + std::to_string(spec.classes) + " classes");
    double sum = 0.0;
    for (double p : prediction) {
        if (!std::isfinite(p) || p < 0.0)
            throw ValidationError("loss_eval: probabilities must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("loss_eval: probabilities sum to " + std::to_string(sum) +
                              ", not 1 within 1e-9");
    if (label < 0 || label >= spec.classes)
        throw ValidationError("loss_eval: class label out of range");
    const double p = prediction[static_cast<std::size_t>(label)];
    if (p <= 0.0)
        throw ValidationError("loss_eval: the true class has probability 0, so the "
                              "cross-entropy is infinite");
    return -std::log(p) + 0.0;  // normalize -log(1) = -0.0 to +0.0
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

std::string to_string(LabelKind k) {
    switch (k) {
        case LabelKind::real: return "real";
        case LabelKind::binary: return "binary";
        case LabelKind::class_index: return "class_index";
    }
    throw ValidationError("unknown label kind");
}

LabelKind label_kind_from_string(const std::string& s) {
    if (s == "real") return LabelKind::real;
    if (s == "binary") return LabelKind::binary;
    if (s == "class_index") return LabelKind::class_index;
    throw ValidationError("unknown label kind '" + s + "'");
}

int SyntheticDataset::dim() const {
    validate();
    return static_cast<int>(examples.front().x.size());
}

void SyntheticDataset::validate() const {
    if (examples.empty()) throw ValidationError("dataset: at least one example required");
    const std::size_t d = examples.front().x.size();
    for (const Example& ex : examples) {
        if (ex.x.size() != d)
            throw ValidationError("dataset: examples must share one input dimension");
        for (double v : ex.x) require_finite(v, "dataset: input");
        require_finite(ex.y, "dataset: label");
        switch (label_kind) {
            case LabelKind::real: break;
            case LabelKind::binary:
                if (ex.y != 1.0 && ex.y != -1.0)
                    throw ValidationError("dataset: binary labels must be -1 or +1");
                break;
            case LabelKind::class_index:
                if (ex.y < 0.0 || ex.y != std::floor(ex.y))
                    throw ValidationError("dataset: class labels must be nonnegative integers");
                break;
        }
    }
}

// ---------------------------------------------------------------------------
// Hypotheses
// ---------------------------------------------------------------------------

void TabularHypothesis::validate() const {
    if (!(norm >= 0.0) || !std::isfinite(norm))
        throw ValidationError("hypothesis: norm must be a finite nonnegative value");
    if (form == Form::affine) {
        if (weights.empty()) throw ValidationError("hypothesis: affine form needs weights");
        for (double w : weights) require_finite(w, "hypothesis: weight");
        require_finite(intercept, "hypothesis: intercept");
        return;
    }
    if (values.size() != cuts.size() + 1)
        throw ValidationError("hypothesis: a table needs one more cell than it has cuts");
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (!(cuts[i] < cuts[i + 1]))
            throw ValidationError("hypothesis: cuts must be strictly ascending");
    for (double c : cuts) require_finite(c, "hypothesis: cut");
    for (const auto& cell : values) {
        if (cell.empty()) throw ValidationError("hypothesis: table cells must be nonempty");
        for (double v : cell) require_finite(v, "hypothesis: table value");
    }
}

std::vector<double> TabularHypothesis::predict_vector(const std::vector<double>& x) const {
    if (form == Form::affine) return {dot(weights, x, "hypothesis") + intercept};
    if (x.empty()) throw ValidationError("hypothesis: table lookup needs a nonempty input");
    std::size_t cell = cuts.size();
    for (std::size_t i = 0; i < cuts.size(); ++i)
        if (x[0] < cuts[i]) {
            cell = i;
            break;
        }
    return values[cell];
}

double TabularHypothesis::predict(const std::vector<double>& x) const {
    return predict_vector(x)[0];
}

// ---------------------------------------------------------------------------
// Risk and profiles
// ---------------------------------------------------------------------------

double empirical_risk(const TabularHypothesis& h, const SyntheticDataset& d,
                      const LossSpec& loss, const RegularizerSpec& reg) {
    d.validate();
    h.validate();
    double total = 0.0;
    for (const Example& ex : d.examples) {
        if (loss.kind == LossKind::cross_entropy) {
            if (ex.y != std::floor(ex.y))
                throw ValidationError("empirical_risk: cross-entropy labels must be class "
                                      "indices");
            total += loss_eval(loss, h.predict_vector(ex.x), static_cast<int>(ex.y));
        } else {
            total += loss_eval(loss, h.predict(ex.x), ex.y);
        }
    }
    return total / static_cast<double>(d.examples.size()) + penalty(reg, h.norm);
}

RiskProfile build_profile_multisource(const std::vector<TabularHypothesis>& hyps,
                                      const std::vector<SyntheticDataset>& envs,
                                      const LossSpec& loss, const RegularizerSpec& reg) {
    if (hyps.empty()) throw ValidationError("build_profile_multisource: no hypotheses");
    if (envs.empty()) throw ValidationError("build_profile_multisource: no environments");
    std::vector<std::vector<double>> rows(envs.size());
    for (std::size_t i = 0; i < envs.size(); ++i) {
        rows[i].reserve(hyps.size());
        for (const TabularHypothesis& h : hyps)
            rows[i].push_back(empirical_risk(h, envs[i], loss, reg));
    }
    return RiskProfile::from_rows(rows);
}

std::vector<SyntheticDataset> split_per_example(const SyntheticDataset& d) {
    d.validate();
    std::vector<SyntheticDataset> out;
    out.reserve(d.examples.size());
    for (std::size_t i = 0; i < d.examples.size(); ++i) {
        SyntheticDataset one;
        one.examples = {d.examples[i]};
        one.label_kind = d.label_kind;
        one.provenance = json{{"split", "per_example"},
                              {"index", i},
                              {"parent", d.provenance}};
        out.push_back(std::move(one));
    }
    return out;
}

RiskProfile build_profile_block(const std::vector<std::vector<TabularHypothesis>>& tuples,
                                const std::vector<SyntheticDataset>& envs,
                                const LossSpec& loss) {
    if (tuples.empty()) throw ValidationError("build_profile_block: no hypothesis tuples");
    if (envs.empty()) throw ValidationError("build_profile_block: no environments");
    for (const auto& t : tuples)
        if (t.size() != envs.size())
            throw ValidationError("build_profile_block: tuple length " +
                                  std::to_string(t.size()) + " does not match " +
                                  std::to_string(envs.size()) + " environments");
    // indicator structure: row i reads component i of each tuple, nothing else
    std::vector<std::vector<double>> rows(envs.size());
    for (std::size_t i = 0; i < envs.size(); ++i) {
        rows[i].reserve(tuples.size());
        for (const auto& t : tuples)
            rows[i].push_back(empirical_risk(t[i], envs[i], loss, RegularizerSpec{}));
    }
    return RiskProfile::from_rows(rows);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

void EnvGenerator::validate() const {
    if (kind != "linear_gaussian" && kind != "label_flip")
        throw ValidationError("generator: unknown kind '" + kind + "'");
    if (weights.empty()) throw ValidationError("generator: weights required");
    for (double w : weights) require_finite(w, "generator: weight");
    require_finite(intercept, "generator: intercept");
    if (examples < 1) throw ValidationError("generator: at least one example required");
    if (kind == "linear_gaussian") {
        if (!(noise >= 0.0) || !std::isfinite(noise))
            throw ValidationError("generator: noise level must be finite and nonnegative");
    } else {
        if (!(flip_rate >= 0.0 && flip_rate <= 1.0))
            throw ValidationError("generator: flip rate must be in [0, 1]");
    }
}

void GeneratorSpec::validate() const {
    if (environments.empty()) throw ValidationError("generator spec: no environments");
    for (const EnvGenerator& g : environments) g.validate();
    for (const TabularHypothesis& h : hypotheses) h.validate();
}

std::vector<SyntheticDataset> synth_generate(const GeneratorSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<SyntheticDataset> out;
    out.reserve(spec.environments.size());
    for (std::size_t e = 0; e < spec.environments.size(); ++e) {
        const EnvGenerator& g = spec.environments[e];
        // the stream, not the position, keys the environment's draws, so
        // identical entries give identical data; draw order is fixed as
        // inputs, then noise or flip, per example
        detail::Rng rng(detail::Rng::mix(seed, g.stream));
        SyntheticDataset d;
        d.label_kind = g.kind == "linear_gaussian" ? LabelKind::real : LabelKind::binary;
        d.examples.reserve(static_cast<std::size_t>(g.examples));
        for (int i = 0; i < g.examples; ++i) {
            Example ex;
            ex.x.resize(g.weights.size());
            for (double& v : ex.x) v = rng.normal();
            const double signal = dot(g.weights, ex.x, "generator") + g.intercept;
            if (g.kind == "linear_gaussian") {
                ex.y = signal + g.noise * rng.normal();
            } else {
                ex.y = signal >= 0.0 ? 1.0 : -1.0;
                if (rng.uniform01() < g.flip_rate) ex.y = -ex.y;
            }
            d.examples.push_back(std::move(ex));
        }
        d.provenance = json{{"generator", to_json(g)},
                            {"seed", seed},
                            {"environment", e}};
        out.push_back(std::move(d));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json to_json(const LossSpec& s) {
    json j{{"kind", to_string(s.kind)}};
    if (s.kind == LossKind::cross_entropy) j["classes"] = s.classes;
    return j;
}

LossSpec loss_spec_from_json(const json& j) {
    LossSpec s;
    s.kind = loss_kind_from_string(require_field(j, "kind", "loss spec").get<std::string>());
    if (j.contains("classes")) {
        if (!j.at("classes").is_number_integer())
            throw ValidationError("loss spec: class count must be an integer");
        s.classes = j.at("classes").get<int>();
    }
    if (s.kind == LossKind::cross_entropy && s.classes < 2)
        throw ValidationError("loss spec: cross-entropy needs a class count of at least 2");
    return s;
}

json to_json(const RegularizerSpec& s) {
    return json{{"omega", to_string(s.omega)}, {"lambda", s.lambda}};
}

RegularizerSpec regularizer_from_json(const json& j) {
    RegularizerSpec s;
    if (j.contains("omega"))
        s.omega = penalty_kind_from_string(j.at("omega").get<std::string>());
    if (j.contains("lambda")) s.lambda = finite_number(j.at("lambda"), "regularizer");
    if (s.lambda < 0.0)
        throw ValidationError("regularizer: strength must be nonnegative");
    return s;
}

json to_json(const TabularHypothesis& h) {
    json j{{"id", h.id}, {"norm", h.norm}};
    if (h.form == TabularHypothesis::Form::affine) {
        j["form"] = "affine";
        j["weights"] = h.weights;
        j["intercept"] = h.intercept;
    } else {
        j["form"] = "table";
        j["cuts"] = h.cuts;
        j["values"] = h.values;
    }
    return j;
}

TabularHypothesis hypothesis_from_json(const json& j) {
    TabularHypothesis h;
    h.id = require_field(j, "id", "hypothesis").get<std::string>();
    if (j.contains("norm")) h.norm = finite_number(j.at("norm"), "hypothesis norm");
    const std::string form = require_field(j, "form", "hypothesis").get<std::string>();
    if (form == "affine") {
        h.form = TabularHypothesis::Form::affine;
        h.weights = number_list(require_field(j, "weights", "hypothesis"), "hypothesis weights");
        if (j.contains("intercept"))
            h.intercept = finite_number(j.at("intercept"), "hypothesis intercept");
    } else if (form == "table") {
        h.form = TabularHypothesis::Form::table;
        if (j.contains("cuts")) h.cuts = number_list(j.at("cuts"), "hypothesis cuts");
        const json& vals = require_field(j, "values", "hypothesis");
        if (!vals.is_array()) throw ValidationError("hypothesis: values must be an array");
        for (const auto& cell : vals)
            h.values.push_back(number_list(cell, "hypothesis table value"));
    } else {
        throw ValidationError("hypothesis: unknown form '" + form + "'");
    }
    h.validate();
    return h;
}

json to_json(const EnvGenerator& g) {
    json j{{"kind", g.kind},
           {"weights", g.weights},
           {"intercept", g.intercept},
           {"examples", g.examples},
           {"stream", g.stream}};
    if (g.kind == "linear_gaussian") j["noise"] = g.noise;
    if (g.kind == "label_flip") j["flip_rate"] = g.flip_rate;
    return j;
}

EnvGenerator env_generator_from_json(const json& j) {
    EnvGenerator g;
    g.kind = require_field(j, "kind", "generator").get<std::string>();
    g.weights = number_list(require_field(j, "weights", "generator"), "generator weights");
    if (j.contains("intercept"))
        g.intercept = finite_number(j.at("intercept"), "generator intercept");
    const json& ex = require_field(j, "examples", "generator");
    if (!ex.is_number_integer()) throw ValidationError("generator: examples must be an integer");
    g.examples = ex.get<int>();
    if (j.contains("noise")) g.noise = finite_number(j.at("noise"), "generator noise");
    if (j.contains("flip_rate"))
        g.flip_rate = finite_number(j.at("flip_rate"), "generator flip rate");
    if (j.contains("stream")) {
        if (!j.at("stream").is_number_integer())
            throw ValidationError("generator: stream must be an integer");
        g.stream = j.at("stream").get<std::uint64_t>();
    }
    g.validate();
    return g;
}

json to_json(const GeneratorSpec& s) {
    json envs = json::array();
    for (const EnvGenerator& g : s.environments) envs.push_back(to_json(g));
    json hyps = json::array();
    for (const TabularHypothesis& h : s.hypotheses) hyps.push_back(to_json(h));
    json j{{"schema_version", 1},
           {"kind", "generator_spec"},
           {"environments", std::move(envs)},
           {"hypotheses", std::move(hyps)},
           {"loss", to_json(s.loss)},
           {"regularizer", to_json(s.regularizer)}};
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

GeneratorSpec generator_spec_from_json(const json& j) {
    if (j.contains("kind") && j.at("kind").get<std::string>() != "generator_spec")
        throw ValidationError("generator spec: document kind is not generator_spec");
    GeneratorSpec s;
    const json& envs = require_field(j, "environments", "generator spec");
    if (!envs.is_array()) throw ValidationError("generator spec: environments must be an array");
    for (const auto& e : envs) s.environments.push_back(env_generator_from_json(e));
    if (j.contains("hypotheses"))
        for (const auto& h : j.at("hypotheses")) s.hypotheses.push_back(hypothesis_from_json(h));
    if (j.contains("loss")) s.loss = loss_spec_from_json(j.at("loss"));
    if (j.contains("regularizer")) s.regularizer = regularizer_from_json(j.at("regularizer"));
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw ValidationError("generator spec: seed must be an integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    s.validate();
    return s;
}

json to_json(const SyntheticDataset& d) {
    json examples = json::array();
    for (const Example& ex : d.examples) examples.push_back(json{{"x", ex.x}, {"y", ex.y}});
    return json{{"schema_version", 1},
                {"kind", "dataset"},
                {"label_kind", to_string(d.label_kind)},
                {"examples", std::move(examples)},
                {"provenance", d.provenance}};
}

SyntheticDataset dataset_from_json(const json& j) {
    if (j.contains("kind") && j.at("kind").get<std::string>() != "dataset")
        throw ValidationError("dataset: document kind is not dataset");
    SyntheticDataset d;
    d.label_kind =
        label_kind_from_string(require_field(j, "label_kind", "dataset").get<std::string>());
    const json& examples = require_field(j, "examples", "dataset");
    if (!examples.is_array()) throw ValidationError("dataset: examples must be an array");
    for (const auto& e : examples) {
        Example ex;
        ex.x = number_list(require_field(e, "x", "dataset example"), "dataset input");
        ex.y = finite_number(require_field(e, "y", "dataset example"), "dataset label");
        d.examples.push_back(std::move(ex));
    }
    if (j.contains("provenance")) d.provenance = j.at("provenance");
    d.validate();
    return d;
}

}  // namespace choicelab::risk
