/// @file zoo.hpp
/// Concrete aggregation rules and the auditor that runs every axiom check
/// against one of them.
#pragma once

#include "choicelab/axioms.hpp"
#include "choicelab/core.hpp"

namespace choicelab::zoo {

/// Minimize risk in one environment only (1-based). The one rule family
/// that passes every check; its environment is the dictator.
AggregationRule erm_single(int env_number);

/// Argmin correspondence of a fixed risk functional over the universe.
/// Ignores the profile passed at choice time. Pooled minimization is the
/// instance whose functional is the mean of the profile rows.
AggregationRule risk_min(std::vector<double> risks);

/// Argmin of the profile-row mean: pooling with equal weights.
AggregationRule pooled_mean();

/// Argmin of sum_i w_i * r_i(h); weights strictly positive, one per
/// environment. Accumulates in ascending environment order.
AggregationRule weighted_sum(std::vector<double> weights);

/// Lexicographic minimum of the risk vector sorted worst-first.
AggregationRule leximin();

/// All hypotheses of the menu not strictly dominated within the menu.
AggregationRule pareto_front();

/// Per environment a hypothesis scores (menu size - position) within the
/// menu restriction; highest total wins. Rejects tied ordinal input.
AggregationRule borda();

/// Argmin of the product of risks; requires strictly positive values.
AggregationRule nash_product();

/// Names accepted by make_rule / the command line.
std::vector<std::string> rule_names();

/// Factory by name. params: {"env_index": int} for erm_single,
/// {"weights": [..]} for weighted_sum; other rules take none.
AggregationRule make_rule(const std::string& name, const json& params);

// ---------------------------------------------------------------------------
// Audit
// ---------------------------------------------------------------------------

struct AuditOptions {
    std::size_t alternatives = 3;
    int environments = 2;
    int samples = 100;      // profiles for alpha/beta/pareto, pairs for iih
    int transforms = 100;   // affine transforms for ir
    std::uint64_t seed = 42;
    bool include_ties = false;     // adds a second with-ties iih verdict
    std::size_t max_menu_size = 0; // 0 = full subset family
    std::optional<RiskProfile> profile;  // fixed profile instead of samples
};

/// One audited rule: per-axiom verdicts plus the dictator search result.
struct AuditReport {
    std::string rule_name;
    json rule_params;
    std::size_t alternatives = 0;
    int environments = 0;
    std::uint64_t seed = 0;
    int samples = 0;
    axioms::Verdict alpha;
    axioms::Verdict beta;
    axioms::Verdict pareto;
    axioms::Verdict iih;
    std::optional<axioms::Verdict> iih_with_ties;
    axioms::Verdict ir;
    axioms::Verdict ci;                // passed iff no dictator
    std::optional<int> dictator;       // 1-based environment number
};

/// Runs alpha, beta, pareto over sampled (or supplied) profiles, iih over
/// sampled ordinally-equal pairs, ir over sampled transforms, and the
/// exhaustive dictator search on the ordinal quotient.
AuditReport audit(const AggregationRule& rule, const AuditOptions& opt);

json to_json(const AuditReport& report);

}  // namespace choicelab::zoo
