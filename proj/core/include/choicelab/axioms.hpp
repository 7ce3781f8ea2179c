/// @file axioms.hpp
/// Checkers for the axioms an aggregation rule may satisfy: contraction and
/// expansion consistency (alpha/beta), Pareto optimality, independence from
/// how irrelevant hypotheses are scored, invariance under positive affine
/// rescaling, and non-dictatorship via exhaustive decisiveness enumeration.
///
/// Every failing verdict carries a self-contained witness: re-running the
/// violated predicate on exactly the witness data reproduces the failure.
/// Witnesses are minimized greedily: subset pairs and menus are scanned
/// ordered by size, then lexicographic rank, so the first failure found is
/// already the smallest this scan can produce.
#pragma once

#include "choicelab/core.hpp"

namespace choicelab::axioms {

enum class AxiomKind { alpha, beta, internal_consistency, pareto, iih, ir, ci };

std::string to_string(AxiomKind k);

/// Self-contained evidence of one violation.
struct Witness {
    std::vector<Menu> menus;
    std::vector<RiskProfile> risk_profiles;
    std::vector<OrdinalProfile> ordinal_profiles;
    /// Observed (menu, chosen) pairs, in the order they matter to the note.
    std::vector<std::pair<Menu, Menu>> choices;
    std::string note;
};

struct Verdict {
    bool passed = false;
    long long checked_count = 0;
    std::optional<Witness> witness;
    /// Set when the verdict is structural ("holds by construction").
    std::string note;
};

/// Ascending environment numbers, 1..n.
using EnvSet = std::vector<int>;

// ---------------------------------------------------------------------------
// Consistency of a materialized correspondence
// ---------------------------------------------------------------------------

/// Contraction: h chosen from F and h in G, G subset of F => h chosen from G.
/// Requires a recorded choice for every menu of fam.
Verdict check_alpha(const ChoiceCorrespondence& cc, const FeasibleFamily& fam);

/// Expansion: if some h is chosen from both G and F with G subset of F, then
/// everything chosen from G is chosen from F.
Verdict check_beta(const ChoiceCorrespondence& cc, const FeasibleFamily& fam);

/// alpha and beta together; the witness names which half failed.
Verdict check_internal_consistency(const ChoiceCorrespondence& cc, const FeasibleFamily& fam);

// ---------------------------------------------------------------------------
// Rule-level checks
// ---------------------------------------------------------------------------

/// For every pair menu {f,g} in fam where f strictly dominates g in every
/// environment of p, the rule must choose exactly {f}. Vacuously true when
/// no dominated pair exists.
Verdict check_pareto(const AggregationRule& rule, const RiskProfile& p,
                     const FeasibleFamily& fam);

struct IihOptions {
    int samples = 100;
    std::uint64_t seed = 0;
    /// Sample weak orders with ties instead of strict orders.
    bool include_ties = false;
};

/// Samples ordinally-equal profile pairs (same per-environment orders,
/// different strictly increasing value assignments) and requires identical
/// choices on every menu of fam. Ordinal-domain rules pass structurally
/// with checked_count 0.
Verdict check_iih(const AggregationRule& rule, std::size_t m, int n,
                  const FeasibleFamily& fam, const IihOptions& opt);

/// Core loop over externally supplied ordinally-equal pairs.
Verdict check_iih_pairs(const AggregationRule& rule, const FeasibleFamily& fam,
                        const std::vector<std::pair<RiskProfile, RiskProfile>>& pairs);

/// Samples k per-environment positive affine transforms (offsets uniform in
/// [-10,10], or [0,10] for positive-domain rules; scales log-uniform in
/// [0.01,100]) and requires choices on every menu to be unchanged.
Verdict check_ir(const AggregationRule& rule, const RiskProfile& p,
                 const FeasibleFamily& fam, int transforms, std::uint64_t seed);

/// Core loop over externally supplied transforms.
Verdict check_ir_transforms(const AggregationRule& rule, const RiskProfile& p,
                            const FeasibleFamily& fam,
                            const std::vector<AffineTransform>& transforms);

// ---------------------------------------------------------------------------
// Dictatorship and decisiveness (ordinal quotient, exhaustive)
// ---------------------------------------------------------------------------

/// Environment i (1-based) is a dictator when for every ordered pair (f,g)
/// and every strict profile ranking f above g in environment i, the rule
/// chooses exactly {f} from {f,g}. Returns the smallest such i.
/// Guard: factorial(m)^n <= 10^7 strict profiles.
std::optional<int> find_dictator(const AggregationRule& rule, std::size_t m, int n);

/// Every strict profile where all environments of E rank f above g yields
/// choice {f} from {f,g}. E holds 1-based environment numbers.
bool is_locally_decisive(const AggregationRule& rule, const EnvSet& set, int f, int g,
                         std::size_t m, int n);

/// All nonempty environment sets decisive over every ordered pair, in
/// canonical order (ascending size, then lexicographic).
std::vector<EnvSet> decisive_sets(const AggregationRule& rule, std::size_t m, int n);

// ---------------------------------------------------------------------------
// Witness replay
// ---------------------------------------------------------------------------

/// True when the witness still demonstrates a violation of the axiom it was
/// produced for. alpha/beta/internal_consistency replay from the recorded
/// choices alone; the rule is required for pareto/iih/ir; ci replays by
/// re-running the dictator search.
bool witness_replays(AxiomKind kind, const Witness& w, const AggregationRule* rule,
                     std::size_t m = 0, int n = 0);

// ---------------------------------------------------------------------------
// Samplers (shared with audits and tests; deterministic in the seed)
// ---------------------------------------------------------------------------

namespace sample {

/// Risk values uniform in [0.1, 10); positive so every rule is in-domain.
RiskProfile profile(std::size_t m, int n, detail::Rng& rng);

/// Random ordinal profile; strict unless include_ties.
OrdinalProfile ordinal_profile(std::size_t m, int n, detail::Rng& rng, bool include_ties);

/// Strictly increasing value assignment realizing the given orders.
/// Positive range when positive is set.
RiskProfile rescore(const OrdinalProfile& p, detail::Rng& rng, bool positive);

AffineTransform affine(int n, detail::Rng& rng, bool nonnegative_offsets);

}  // namespace sample

json to_json(const Witness& w, const Universe& u);
json to_json(const Verdict& v, AxiomKind kind, const Universe& u);

}  // namespace choicelab::axioms
