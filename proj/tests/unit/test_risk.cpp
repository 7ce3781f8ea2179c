#include <doctest.h>

#include <cmath>
#include <numeric>

#include "choicelab/risk.hpp"
#include "choicelab/zoo.hpp"

using namespace choicelab;
using doctest::Approx;

namespace {

risk::TabularHypothesis affine(std::string id, std::vector<double> w, double b,
                               double norm = 0.0) {
    risk::TabularHypothesis h;
    h.id = std::move(id);
    h.form = risk::TabularHypothesis::Form::affine;
    h.weights = std::move(w);
    h.intercept = b;
    h.norm = norm;
    return h;
}

risk::TabularHypothesis table(std::string id, std::vector<double> cuts,
                              std::vector<std::vector<double>> values) {
    risk::TabularHypothesis h;
    h.id = std::move(id);
    h.form = risk::TabularHypothesis::Form::table;
    h.cuts = std::move(cuts);
    h.values = std::move(values);
    return h;
}

risk::SyntheticDataset handmade(std::vector<risk::Example> ex, risk::LabelKind kind) {
    risk::SyntheticDataset d;
    d.examples = std::move(ex);
    d.label_kind = kind;
    return d;
}

risk::GeneratorSpec small_spec() {
    risk::GeneratorSpec spec;
    risk::EnvGenerator g;
    g.kind = "linear_gaussian";
    g.weights = {1.0, -2.0};
    g.intercept = 0.5;
    g.noise = 0.1;
    g.examples = 40;
    g.stream = 0;
    spec.environments.push_back(g);
    g.stream = 1;
    g.intercept = -0.5;
    spec.environments.push_back(g);
    spec.hypotheses = {affine("h0", {1.0, -2.0}, 0.5, 1.5), affine("h1", {0.0, 0.0}, 0.0, 0.5)};
    spec.loss.kind = risk::LossKind::square;
    return spec;
}

}  // namespace

TEST_SUITE("risk") {

TEST_CASE("scalar losses match their formulas") {
    risk::LossSpec square{risk::LossKind::square, 0};
    CHECK_EQ(risk::loss_eval(square, 2.0, 3.0), Approx(1.0));

    risk::LossSpec hinge{risk::LossKind::hinge, 0};
    CHECK_EQ(risk::loss_eval(hinge, 0.5, 1.0), Approx(0.5));
    CHECK_EQ(risk::loss_eval(hinge, -2.0, -1.0), Approx(0.0));
    CHECK_EQ(risk::loss_eval(hinge, -2.0, 1.0), Approx(3.0));
    CHECK_THROWS_AS(risk::loss_eval(hinge, 0.5, 0.5), ValidationError);
    CHECK_THROWS_AS(risk::loss_eval(hinge, 0.5, 0.0), ValidationError);

    risk::LossSpec abs{risk::LossKind::absolute, 0};
    CHECK_EQ(risk::loss_eval(abs, 2.0, -1.0), Approx(3.0));
}

TEST_CASE("cross entropy validates its probability vector") {
    risk::LossSpec ce{risk::LossKind::cross_entropy, 3};
    // a certain hit costs exactly nothing, sign included
    const double zero = risk::loss_eval(ce, {1.0, 0.0, 0.0}, 0);
    CHECK_EQ(zero, 0.0);
    CHECK_FALSE(std::signbit(zero));
    CHECK_EQ(risk::loss_eval(ce, {0.7, 0.2, 0.1}, 0), Approx(-std::log(0.7)));

    CHECK_THROWS_AS(risk::loss_eval(ce, {0.5, 0.2, 0.1}, 0), ValidationError);   // sum
    CHECK_THROWS_AS(risk::loss_eval(ce, {1.1, -0.1, 0.0}, 0), ValidationError);  // negative
    CHECK_THROWS_AS(risk::loss_eval(ce, {0.7, 0.2, 0.1}, 3), ValidationError);   // label range
    CHECK_THROWS_AS(risk::loss_eval(ce, {0.7, 0.2, 0.1}, -1), ValidationError);
    CHECK_THROWS_AS(risk::loss_eval(ce, {1.0, 0.0, 0.0}, 1), ValidationError);   // certain miss
    CHECK_THROWS_AS(risk::loss_eval(ce, {0.5, 0.5}, 0), ValidationError);        // length
    CHECK_THROWS_AS(risk::loss_eval(ce, 0.5, 0.0), ValidationError);             // scalar call
    risk::LossSpec tiny{risk::LossKind::cross_entropy, 1};
    CHECK_THROWS_AS(risk::loss_eval(tiny, std::vector<double>{1.0}, 0),
                    ValidationError);  // classes < 2
}

TEST_CASE("penalties and empirical risk compose") {
    risk::RegularizerSpec identity{risk::PenaltyKind::identity, 0.5};
    CHECK_EQ(risk::penalty(identity, 2.0), Approx(1.0));
    risk::RegularizerSpec squared{risk::PenaltyKind::square, 0.5};
    CHECK_EQ(risk::penalty(squared, 2.0), Approx(2.0));
    CHECK_THROWS_AS(risk::penalty({risk::PenaltyKind::identity, -1.0}, 2.0), ValidationError);
    CHECK_THROWS_AS(risk::penalty(identity, -0.1), ValidationError);

    // h(x) = x, square losses 1 and 3, mean 2; identity penalty adds 0.5 * 2
    const auto h = affine("h", {1.0}, 0.0, 2.0);
    const auto d = handmade({{{1.0}, 2.0}, {{2.0}, 2.0 + std::sqrt(3.0)}},
                            risk::LabelKind::real);
    risk::LossSpec square{risk::LossKind::square, 0};
    CHECK_EQ(risk::empirical_risk(h, d, square), Approx(2.0));
    CHECK_EQ(risk::empirical_risk(h, d, square, identity), Approx(3.0));

    const auto empty = handmade({}, risk::LabelKind::real);
    CHECK_THROWS_AS(risk::empirical_risk(h, empty, square), ValidationError);
}

TEST_CASE("hypothesis forms predict and validate") {
    const auto aff = affine("a", {2.0, -1.0}, 0.5);
    CHECK_EQ(aff.predict({1.0, 1.0}), Approx(1.5));
    CHECK_THROWS_AS(aff.predict({1.0}), ValidationError);

    const auto step = table("t", {0.0}, {{-1.0}, {1.0}});
    CHECK_EQ(step.predict({-0.5}), Approx(-1.0));
    CHECK_EQ(step.predict({0.0}), Approx(1.0));  // boundary goes to the catch-all
    CHECK_EQ(step.predict({3.0}), Approx(1.0));

    auto bad = table("b", {1.0, 0.0}, {{0.0}, {1.0}, {2.0}});  // cuts not ascending
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    auto mismatch = table("m", {0.0}, {{0.0}});  // needs cuts+1 cells
    CHECK_THROWS_AS(mismatch.validate(), ValidationError);
    auto nan_w = affine("n", {std::nan("")}, 0.0);
    CHECK_THROWS_AS(nan_w.validate(), ValidationError);
}

TEST_CASE("datasets validate their labels") {
    CHECK_THROWS_AS(handmade({}, risk::LabelKind::real).validate(), ValidationError);
    CHECK_THROWS_AS(
        handmade({{{1.0}, 1.0}, {{1.0, 2.0}, 1.0}}, risk::LabelKind::real).validate(),
        ValidationError);  // ragged inputs
    CHECK_THROWS_AS(handmade({{{1.0}, 0.5}}, risk::LabelKind::binary).validate(),
                    ValidationError);
    CHECK_THROWS_AS(handmade({{{1.0}, -1.0}}, risk::LabelKind::class_index).validate(),
                    ValidationError);
    CHECK_THROWS_AS(handmade({{{1.0}, 1.5}}, risk::LabelKind::class_index).validate(),
                    ValidationError);
    CHECK_NOTHROW(handmade({{{1.0}, -1.0}, {{2.0}, 1.0}}, risk::LabelKind::binary).validate());
}

TEST_CASE("generation is keyed by seed and stream") {
    const auto spec = small_spec();
    const auto a = risk::synth_generate(spec, 2024);
    const auto b = risk::synth_generate(spec, 2024);
    REQUIRE_EQ(a.size(), 2);
    CHECK_EQ(to_json(a[0]), to_json(b[0]));  // bit-identical regeneration
    CHECK_EQ(to_json(a[1]), to_json(b[1]));

    const auto c = risk::synth_generate(spec, 2025);
    CHECK_NE(to_json(a[0]), to_json(c[0]));

    // identical entries with identical streams generate identical data
    auto twin_spec = spec;
    twin_spec.environments[1] = twin_spec.environments[0];
    const auto twins = risk::synth_generate(twin_spec, 2024);
    CHECK_EQ(to_json(twins[0]).at("examples"), to_json(twins[1]).at("examples"));

    // distinct streams decorrelate otherwise identical entries
    twin_spec.environments[1].stream = 7;
    const auto split = risk::synth_generate(twin_spec, 2024);
    CHECK_NE(to_json(split[0]).at("examples"), to_json(split[1]).at("examples"));

    for (const auto& d : a) {
        CHECK_NOTHROW(d.validate());
        CHECK_EQ(d.examples.size(), 40);
        CHECK_EQ(d.provenance.at("seed"), 2024);
    }
}

TEST_CASE("label flipping degrades the true hypothesis") {
    risk::EnvGenerator g;
    g.kind = "label_flip";
    g.weights = {1.5, -1.0};
    g.examples = 400;
    g.flip_rate = 0.0;
    risk::GeneratorSpec spec;
    spec.environments = {g};
    spec.hypotheses = {affine("truth", {1.5, -1.0}, 0.0)};
    spec.loss.kind = risk::LossKind::hinge;

    const auto clean = risk::synth_generate(spec, 11)[0];
    CHECK_EQ(clean.label_kind, risk::LabelKind::binary);
    const risk::LossSpec hinge{risk::LossKind::hinge, 0};
    const double clean_risk = risk::empirical_risk(spec.hypotheses[0], clean, hinge);

    spec.environments[0].flip_rate = 0.4;
    const auto noisy = risk::synth_generate(spec, 11)[0];
    const double noisy_risk = risk::empirical_risk(spec.hypotheses[0], noisy, hinge);
    CHECK(noisy_risk > clean_risk);

    CHECK_THROWS_AS([&] {
        risk::EnvGenerator bad = g;
        bad.flip_rate = 1.5;
        bad.validate();
    }(), ValidationError);
    CHECK_THROWS_AS([&] {
        risk::EnvGenerator bad = g;
        bad.kind = "mystery";
        bad.validate();
    }(), ValidationError);
}

TEST_CASE("multisource profiles match a hand loop") {
    const auto spec = small_spec();
    const auto envs = risk::synth_generate(spec, 7);
    const risk::RegularizerSpec reg{risk::PenaltyKind::square, 0.25};
    const auto p = risk::build_profile_multisource(spec.hypotheses, envs, spec.loss, reg);
    REQUIRE_EQ(p.environments(), 2);
    REQUIRE_EQ(p.hypotheses(), 2);
    for (int e = 0; e < 2; ++e)
        for (int h = 0; h < 2; ++h) {
            const auto& hyp = spec.hypotheses[static_cast<std::size_t>(h)];
            const auto& data = envs[static_cast<std::size_t>(e)];
            double total = 0.0;
            for (const auto& ex : data.examples) {
                const double diff = hyp.predict(ex.x) - ex.y;
                total += diff * diff;
            }
            const double expected = total / static_cast<double>(data.examples.size()) +
                                    0.25 * hyp.norm * hyp.norm;
            CHECK_EQ(p.at(e, h), Approx(expected).epsilon(1e-12));
        }
}

TEST_CASE("per-example splits make one environment per draw") {
    const auto spec = small_spec();
    const auto envs = risk::synth_generate(spec, 3);
    const auto split = risk::split_per_example(envs[0]);
    REQUIRE_EQ(split.size(), envs[0].examples.size());
    for (std::size_t i = 0; i < split.size(); ++i) {
        CHECK_EQ(split[i].examples.size(), 1);
        CHECK_EQ(split[i].label_kind, envs[0].label_kind);
        CHECK_EQ(split[i].provenance.at("index"), i);
    }
    const auto p = risk::build_profile_multisource(spec.hypotheses, split, spec.loss);
    CHECK_EQ(p.environments(), static_cast<int>(split.size()));
    // each row is the single example's loss, no averaging left
    const double lone = risk::loss_eval(spec.loss, spec.hypotheses[1].predict(
                                             envs[0].examples[5].x),
                                        envs[0].examples[5].y);
    CHECK_EQ(p.at(5, 1), Approx(lone).epsilon(1e-12));
}

TEST_CASE("block profiles read only their own tuple component") {
    const auto spec = small_spec();
    const auto envs = risk::synth_generate(spec, 13);
    const auto& h0 = spec.hypotheses[0];
    const auto& h1 = spec.hypotheses[1];

    std::vector<std::vector<risk::TabularHypothesis>> tuples;
    for (const auto& first : {h0, h1})
        for (const auto& second : {h0, h1}) tuples.push_back({first, second});

    const auto p = risk::build_profile_block(tuples, envs, spec.loss);
    REQUIRE_EQ(p.environments(), 2);
    REQUIRE_EQ(p.hypotheses(), 4);

    // row i of tuple t equals the plain risk of component i; permuting the
    // other component never moves the entry
    for (std::size_t t = 0; t < tuples.size(); ++t)
        for (int e = 0; e < 2; ++e) {
            const auto& comp = tuples[t][static_cast<std::size_t>(e)];
            const double expected =
                risk::empirical_risk(comp, envs[static_cast<std::size_t>(e)], spec.loss);
            CHECK_EQ(p.at(e, static_cast<int>(t)), Approx(expected).epsilon(1e-12));
        }
    CHECK_EQ(p.at(0, 0), p.at(0, 1));  // tuples (h0,h0) and (h0,h1) share row 0
    CHECK_EQ(p.at(1, 0), p.at(1, 2));

    CHECK_THROWS_AS(risk::build_profile_block({{h0}}, envs, spec.loss), ValidationError);
}

TEST_CASE("spec files round-trip") {
    auto spec = small_spec();
    spec.seed = 99;
    const json j = risk::to_json(spec);
    CHECK_EQ(j.at("kind"), "generator_spec");
    const auto back = risk::generator_spec_from_json(j);
    CHECK_EQ(risk::to_json(back), j);
    CHECK_EQ(back.environments[1].stream, 1);
    CHECK_EQ(back.seed, 99);

    const auto data = risk::synth_generate(spec, *spec.seed);
    const auto parsed = risk::dataset_from_json(risk::to_json(data[0]));
    CHECK_EQ(risk::to_json(parsed), risk::to_json(data[0]));

    json broken = j;
    broken["environments"][0]["kind"] = "mystery";
    CHECK_THROWS_AS(risk::generator_spec_from_json(broken), ValidationError);
    json truncated = j;
    truncated.erase("environments");
    CHECK_THROWS_AS(risk::generator_spec_from_json(truncated), ValidationError);

    const auto h = risk::hypothesis_from_json(risk::to_json(spec.hypotheses[0]));
    CHECK_EQ(h.id, "h0");
    CHECK_EQ(h.weights, spec.hypotheses[0].weights);
}

TEST_CASE("table hypotheses carry class probabilities for cross entropy") {
    const auto classifier = table("c", {0.0}, {{0.7, 0.3}, {0.2, 0.8}});
    const risk::LossSpec ce{risk::LossKind::cross_entropy, 2};
    const auto d = handmade({{{-1.0}, 0.0}, {{1.0}, 1.0}}, risk::LabelKind::class_index);
    // -log(0.7) for the first example, -log(0.8) for the second
    const double expected = (-std::log(0.7) - std::log(0.8)) / 2.0;
    CHECK_EQ(risk::empirical_risk(classifier, d, ce), Approx(expected));
}

TEST_CASE("ordinal rules cannot see monotone recalibration of one environment") {
    const auto spec = small_spec();
    const auto envs = risk::synth_generate(spec, 21);
    auto hyps = spec.hypotheses;
    hyps.push_back(affine("h2", {0.5, -1.0}, 0.2));
    const auto p = risk::build_profile_multisource(hyps, envs, spec.loss);

    const auto fam = enumerate_menus(make_universe(default_labels(3)));
    const auto rule = zoo::erm_single(2);
    for (const auto& t : MonotoneTransform::catalogue()) {
        const RiskProfile warped = apply_monotone(p, 1, t);
        for (const Menu& m : fam) CHECK_EQ(rule.choose(p, m), rule.choose(warped, m));
    }
}

}  // TEST_SUITE
