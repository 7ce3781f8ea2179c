#include "choicelab/zoo.hpp"
#include "choicelab/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace choicelab::zoo {

namespace {

std::vector<double> column(const RiskProfile& p, const Menu& menu,
                           const std::function<double(int)>& score) {
    std::vector<double> values(p.hypotheses(), 0.0);
    for (int h : menu) values[static_cast<std::size_t>(h)] = score(h);
    return values;
}

}  // namespace

AggregationRule erm_single(int env_number) {
    if (env_number < 1) throw ValidationError("erm_single: environment numbers start at 1");
    AggregationRule rule;
    rule.name = "erm_single";
    rule.params = json{{"env_index", env_number}};
    rule.domain_kind = DomainKind::numeric;
    rule.pairwise_by_direction = true;
    rule.numeric_eval = [env_number](const RiskProfile& p, const Menu& menu) {
        if (env_number > p.environments())
            throw ValidationError("erm_single: profile has no environment " +
                                  std::to_string(env_number));
        const int e = env_number - 1;
        return argmin_on_menu(column(p, menu, [&](int h) { return p.at(e, h); }), menu);
    };
    rule.ordinal_eval = [env_number](const OrdinalProfile& p, const Menu& menu) {
        if (env_number > p.environments())
            throw ValidationError("erm_single: profile has no environment " +
                                  std::to_string(env_number));
        const int e = env_number - 1;
        std::vector<double> values(p.hypotheses(), 0.0);
        for (int h : menu) values[static_cast<std::size_t>(h)] = p.rank(e, h);
        return argmin_on_menu(values, menu);
    };
    return rule;
}

AggregationRule risk_min(std::vector<double> risks) {
    if (risks.empty()) throw ValidationError("risk_min: functional must be nonempty");
    for (double r : risks)
        if (!std::isfinite(r)) throw ValidationError("risk_min: non-finite risk value");
    AggregationRule rule;
    rule.name = "risk_min";
    rule.params = json{{"risks", risks}};
    rule.domain_kind = DomainKind::numeric;
    rule.numeric_eval = [values = std::move(risks)](const RiskProfile&, const Menu& menu) {
        return argmin_on_menu(values, menu);
    };
    return rule;
}

AggregationRule pooled_mean() {
    AggregationRule rule;
    rule.name = "pooled_mean";
    rule.domain_kind = DomainKind::numeric;
    rule.numeric_eval = [](const RiskProfile& p, const Menu& menu) {
        // Mean accumulated in ascending environment order (matches the
        // documented summation order of weighted_sum).
        const auto score = [&](int h) {
            double sum = 0.0;
            for (int e = 0; e < p.environments(); ++e) sum += p.at(e, h);
            return sum / static_cast<double>(p.environments());
        };
        return argmin_on_menu(column(p, menu, score), menu);
    };
    return rule;
}

AggregationRule weighted_sum(std::vector<double> weights) {
    if (weights.empty()) throw ValidationError("weighted_sum: needs at least one weight");
    for (double w : weights)
        if (!std::isfinite(w) || w <= 0.0)
            throw ValidationError("weighted_sum: weights must be strictly positive");
    AggregationRule rule;
    rule.name = "weighted_sum";
    rule.params = json{{"weights", weights}};
    rule.domain_kind = DomainKind::numeric;
    rule.numeric_eval = [w = std::move(weights)](const RiskProfile& p, const Menu& menu) {
        if (static_cast<int>(w.size()) != p.environments())
            throw ValidationError("weighted_sum: " + std::to_string(w.size()) +
                                  " weights against " + std::to_string(p.environments()) +
                                  " environments");
        const auto score = [&](int h) {
            double sum = 0.0;
            for (int e = 0; e < p.environments(); ++e)
                sum += w[static_cast<std::size_t>(e)] * p.at(e, h);
            return sum;
        };
        return argmin_on_menu(column(p, menu, score), menu);
    };
    return rule;
}

AggregationRule leximin() {
    AggregationRule rule;
    rule.name = "leximin";
    rule.domain_kind = DomainKind::numeric;
    rule.numeric_eval = [](const RiskProfile& p, const Menu& menu) {
        // Compare risk vectors sorted worst-first, lexicographically.
        const auto key = [&](int h) {
            std::vector<double> v(static_cast<std::size_t>(p.environments()));
            for (int e = 0; e < p.environments(); ++e) v[static_cast<std::size_t>(e)] = p.at(e, h);
            std::sort(v.begin(), v.end(), std::greater<double>());
            return v;
        };
        std::vector<double> best;
        for (int h : menu) {
            auto k = key(h);
            if (best.empty() || k < best) best = std::move(k);
        }
        std::vector<int> chosen;
        for (int h : menu)
            if (key(h) == best) chosen.push_back(h);
        return Menu(chosen);
    };
    return rule;
}

AggregationRule pareto_front() {
    AggregationRule rule;
    rule.name = "pareto_front";
    rule.domain_kind = DomainKind::numeric;
    rule.numeric_eval = [](const RiskProfile& p, const Menu& menu) {
        std::vector<int> front;
        for (int h : menu) {
            bool dominated = false;
            for (int o : menu) {
                if (o == h) continue;
                bool strict_all = true;
                for (int e = 0; e < p.environments(); ++e)
                    if (!(p.at(e, o) < p.at(e, h))) {
                        strict_all = false;
                        break;
                    }
                if (strict_all) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) front.push_back(h);
        }
        return Menu(front);
    };
    return rule;
}

AggregationRule borda() {
    AggregationRule rule;
    rule.name = "borda";
    rule.domain_kind = DomainKind::ordinal;
    rule.strict_ordinal_only = true;
    rule.pairwise_by_direction = true;
    rule.ordinal_eval = [](const OrdinalProfile& p, const Menu& menu) {
        if (!p.strict())
            throw ValidationError("borda: requires tie-free ordinal input");
        // Position within the menu restriction, 1-based; score = size - pos.
        std::vector<double> neg_score(p.hypotheses(), 0.0);
        for (int e = 0; e < p.environments(); ++e) {
            for (int h : menu) {
                int pos = 1;
                for (int o : menu)
                    if (p.better(e, o, h)) ++pos;
                neg_score[static_cast<std::size_t>(h)] -=
                    static_cast<double>(menu.size()) - static_cast<double>(pos);
            }
        }
        return argmin_on_menu(neg_score, menu);
    };
    return rule;
}

AggregationRule nash_product() {
    AggregationRule rule;
    rule.name = "nash_product";
    rule.domain_kind = DomainKind::numeric;
    rule.requires_positive = true;
    rule.numeric_eval = [](const RiskProfile& p, const Menu& menu) {
        const auto score = [&](int h) {
            double prod = 1.0;
            for (int e = 0; e < p.environments(); ++e) prod *= p.at(e, h);
            return prod;
        };
        return argmin_on_menu(column(p, menu, score), menu);
    };
    return rule;
}

std::vector<std::string> rule_names() {
    return {"erm_single", "pooled_mean", "weighted_sum", "leximin",
            "pareto_front", "borda", "nash_product"};
}

AggregationRule make_rule(const std::string& name, const json& params) {
    if (name == "erm_single") {
        if (!params.contains("env_index") || !params["env_index"].is_number_integer())
            throw ValidationError("erm_single: requires an integer 'env_index' parameter");
        return erm_single(params["env_index"].get<int>());
    }
    if (name == "pooled_mean") return pooled_mean();
    if (name == "weighted_sum") {
        if (!params.contains("weights") || !params["weights"].is_array())
            throw ValidationError("weighted_sum: requires a 'weights' array parameter");
        std::vector<double> w;
        for (const auto& x : params["weights"]) {
            if (!x.is_number()) throw ValidationError("weighted_sum: weights must be numeric");
            w.push_back(x.get<double>());
        }
        return weighted_sum(w);
    }
    if (name == "leximin") return leximin();
    if (name == "pareto_front") return pareto_front();
    if (name == "borda") return borda();
    if (name == "nash_product") return nash_product();
    throw ValidationError("unknown rule '" + name + "'; known rules: erm_single, pooled_mean, "
                          "weighted_sum, leximin, pareto_front, borda, nash_product");
}

// ---------------------------------------------------------------------------
// Audit
// ---------------------------------------------------------------------------

namespace {

ChoiceCorrespondence induce(const AggregationRule& rule, const RiskProfile& p,
                            const FeasibleFamily& fam) {
    if (rule.domain_kind == DomainKind::ordinal) return materialize(rule, ordinalize(p), fam);
    return materialize(rule, p, fam);
}

}  // namespace

AuditReport audit(const AggregationRule& rule, const AuditOptions& opt) {
    if (opt.environments < 1) throw ValidationError("audit: needs at least one environment");
    if (opt.alternatives < 2) throw ValidationError("audit: needs at least two hypotheses");
    if (opt.samples < 1) throw ValidationError("audit: samples must be positive");
    if (opt.profile) {
        if (opt.profile->hypotheses() != opt.alternatives ||
            opt.profile->environments() != opt.environments)
            throw ValidationError("audit: supplied profile does not match the domain size");
    }

    const Universe u = make_universe(default_labels(opt.alternatives));
    const FeasibleFamily fam = enumerate_menus(u, opt.max_menu_size);

    AuditReport report;
    report.rule_name = rule.name;
    report.rule_params = rule.params;
    report.alternatives = opt.alternatives;
    report.environments = opt.environments;
    report.seed = opt.seed;
    report.samples = opt.samples;

    // alpha / beta / pareto aggregate over the sampled (or supplied)
    // profiles; the first failure in sampling order is reported and each
    // check stops sampling once it has a witness.
    report.alpha.passed = true;
    report.beta.passed = true;
    report.pareto.passed = true;
    detail::Rng rng(opt.seed);
    const int profile_count = opt.profile ? 1 : opt.samples;
    for (int s = 0; s < profile_count; ++s) {
        if (!report.alpha.passed && !report.beta.passed && !report.pareto.passed) break;
        const RiskProfile p = opt.profile
                                  ? *opt.profile
                                  : axioms::sample::profile(opt.alternatives,
                                                            opt.environments, rng);
        if (report.alpha.passed || report.beta.passed) {
            const ChoiceCorrespondence cc = induce(rule, p, fam);
            if (report.alpha.passed) {
                axioms::Verdict a = axioms::check_alpha(cc, fam);
                report.alpha.checked_count += a.checked_count;
                if (!a.passed) {
                    report.alpha.passed = false;
                    report.alpha.witness = std::move(a.witness);
                }
            }
            if (report.beta.passed) {
                axioms::Verdict b = axioms::check_beta(cc, fam);
                report.beta.checked_count += b.checked_count;
                if (!b.passed) {
                    report.beta.passed = false;
                    report.beta.witness = std::move(b.witness);
                }
            }
        }
        if (report.pareto.passed) {
            axioms::Verdict po = axioms::check_pareto(rule, p, fam);
            report.pareto.checked_count += po.checked_count;
            if (!po.passed) {
                report.pareto.passed = false;
                report.pareto.witness = std::move(po.witness);
            }
        }
    }

    axioms::IihOptions iih_opt;
    iih_opt.samples = opt.samples;
    iih_opt.seed = detail::Rng::mix(opt.seed, 1);
    iih_opt.include_ties = false;
    report.iih = axioms::check_iih(rule, opt.alternatives, opt.environments, fam, iih_opt);
    if (opt.include_ties) {
        if (rule.strict_ordinal_only) {
            axioms::Verdict skipped;
            skipped.passed = true;
            skipped.checked_count = 0;
            skipped.note = "skipped: rule rejects tied ordinal input";
            report.iih_with_ties = skipped;
        } else {
            iih_opt.include_ties = true;
            iih_opt.seed = detail::Rng::mix(opt.seed, 2);
            report.iih_with_ties =
                axioms::check_iih(rule, opt.alternatives, opt.environments, fam, iih_opt);
        }
    }

    if (rule.domain_kind == DomainKind::ordinal) {
        report.ir.passed = true;
        report.ir.checked_count = 0;
        report.ir.note = "holds by construction: the rule reads only the per-environment orders";
    } else {
        detail::Rng prng(detail::Rng::mix(opt.seed, 3));
        const RiskProfile base =
            opt.profile ? *opt.profile
                        : axioms::sample::profile(opt.alternatives, opt.environments, prng);
        report.ir = axioms::check_ir(rule, base, fam, opt.transforms,
                                     detail::Rng::mix(opt.seed, 4));
    }

    report.dictator = axioms::find_dictator(rule, opt.alternatives, opt.environments);
    report.ci.passed = !report.dictator.has_value();
    report.ci.checked_count =
        static_cast<long long>(detail::factorial(opt.alternatives));
    for (int e = 1; e < opt.environments; ++e)
        report.ci.checked_count *= static_cast<long long>(detail::factorial(opt.alternatives));
    if (report.dictator) {
        axioms::Witness w;
        w.note = "environment " + std::to_string(*report.dictator) +
                 " dictates every pairwise choice; replay by re-running the exhaustive "
                 "dictator search";
        report.ci.witness = std::move(w);
    }
    return report;
}

json to_json(const AuditReport& report) {
    const Universe u = make_universe(default_labels(report.alternatives));
    json axioms_array = json::array();
    axioms_array.push_back(axioms::to_json(report.alpha, axioms::AxiomKind::alpha, u));
    axioms_array.push_back(axioms::to_json(report.beta, axioms::AxiomKind::beta, u));
    axioms_array.push_back(axioms::to_json(report.pareto, axioms::AxiomKind::pareto, u));
    axioms_array.push_back(axioms::to_json(report.iih, axioms::AxiomKind::iih, u));
    if (report.iih_with_ties) {
        json with_ties =
            axioms::to_json(*report.iih_with_ties, axioms::AxiomKind::iih, u);
        with_ties["axiom"] = "iih_with_ties";
        axioms_array.push_back(std::move(with_ties));
    }
    axioms_array.push_back(axioms::to_json(report.ir, axioms::AxiomKind::ir, u));
    json ci = axioms::to_json(report.ci, axioms::AxiomKind::ci, u);
    if (report.dictator) ci["dictator"] = *report.dictator;
    axioms_array.push_back(std::move(ci));

    return json{{"schema_version", io::kSchemaVersion},
                {"kind", "axiom_report"},
                {"rule", json{{"name", report.rule_name}, {"params", report.rule_params}}},
                {"domain", json{{"alternatives", report.alternatives},
                                {"environments", report.environments}}},
                {"seed", report.seed},
                {"samples", report.samples},
                {"axioms", std::move(axioms_array)}};
}

}  // namespace choicelab::zoo
