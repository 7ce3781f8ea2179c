/// @file verify.hpp
/// Exhaustive search over pairwise-table rules on three hypotheses, the
/// machine-checked collapse results, and the decisive-set contraction trace.
///
/// A rule assembled from pairwise tables reads, for each ordered pair of
/// hypotheses, only the per-environment direction of comparison. Such rules
/// satisfy hypothesis independence and rescaling invariance by construction,
/// so the search space is exactly the rules those two requirements leave,
/// and the remaining filters (internal consistency, unanimity, no dictator)
/// are applied table by table.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "choicelab/axioms.hpp"
#include "choicelab/core.hpp"

namespace choicelab::verify {

/// The searchable universe size. Two hypotheses leave consistency vacuous;
/// four explode the table space. The m parameters below exist so callers
/// state the domain explicitly, but only 3 passes the guard.
inline constexpr int kAlternatives = 3;

// ---------------------------------------------------------------------------
// Pairwise tables
// ---------------------------------------------------------------------------

/// Bit of `direction` for environment `env_number` (1-based). Environment 1
/// is the most significant bit; 0 means the first element of the pair has
/// strictly lower risk there, 1 means the second does.
int direction_bit(int direction, int env_number, int environments);

/// Direction vector of ordered pair (f, g) under a strict profile.
int profile_direction(const OrdinalProfile& p, int f, int g);

/// Social verdict for one hypothesis pair as a function of its direction
/// vector. The code string holds one digit per direction vector d = 0 ..
/// 2^n - 1: '0' first element strictly preferred, '1' second, '2' tie.
class PairwiseTable {
public:
    PairwiseTable(int environments, std::string code);

    /// Table that copies environment env_number's comparison.
    static PairwiseTable dictator(int environments, int env_number);

    int environments() const { return environments_; }
    int entries() const { return static_cast<int>(code_.size()); }
    const std::string& code() const { return code_; }
    int outcome(int direction) const { return code_[static_cast<std::size_t>(direction)] - '0'; }

    /// Unanimity entries pinned: the all-0 direction resolves to the first
    /// element, the all-1 direction to the second.
    bool pareto_consistent() const;

    bool is_dictator_for(int env_number) const;

    bool operator==(const PairwiseTable& o) const = default;

private:
    int environments_ = 0;
    std::string code_;
};

/// All tables for n environments in ascending code order; 3^(2^n - 2) when
/// the two unanimity entries are pinned, 3^(2^n) otherwise. Guard: n <= 3
/// for the materialized vector.
std::vector<PairwiseTable> enumerate_pairwise_tables(int environments,
                                                     bool require_pareto = true);

/// Streaming form for spaces too large to hold at once. Guard: n <= 4.
void for_each_pairwise_table(int environments, bool require_pareto,
                             const std::function<void(const PairwiseTable&)>& fn);

/// Whether three pair verdicts assemble into a transitive weak order on
/// {f, g, h}. Outcomes are 0 / 1 / 2 as in PairwiseTable, for the pairs
/// (f,g), (f,h), (g,h) in that orientation.
bool outcomes_transitive(int o_fg, int o_fh, int o_gh);

// ---------------------------------------------------------------------------
// Candidate rules
// ---------------------------------------------------------------------------

/// A full rule on three hypotheses: one table per pair, oriented (f,g),
/// (f,h), (g,h). Consistency is a checked property, not an invariant.
struct CandidateRule {
    PairwiseTable fg;
    PairwiseTable fh;
    PairwiseTable gh;

    int environments() const { return fg.environments(); }

    /// Environment whose comparison every table copies, if any (1-based).
    std::optional<int> dictator() const;

    /// Every strict profile (6^n of them) induces a transitive weak order.
    bool internally_consistent() const;

    /// Materializable rule choosing maximal elements of the induced order.
    /// Its evaluator throws ValidationError on a menu left without maximal
    /// elements, which only an inconsistent candidate can produce.
    AggregationRule as_rule() const;
};

// ---------------------------------------------------------------------------
// Survivor search
// ---------------------------------------------------------------------------

/// Requirement set applied by the search. Hypothesis independence (iih) and
/// rescaling invariance (ir) hold by construction of the table
/// representation; their flags are recorded but cannot widen the space.
struct AxiomSet {
    bool internal_consistency = true;
    bool pareto = true;
    bool iih = true;
    bool ir = true;
    bool ci = false;
};

struct SearchOptions {
    int alternatives = kAlternatives;  // guard: exactly 3
    int environments = 3;              // guard: 1..3
    AxiomSet axioms;
    /// Dropping pareto from the axiom set grows the table space 9x per pair
    /// and is refused unless this override is set (n <= 2).
    bool allow_missing_pareto = false;
    /// Constrain the third table from the first two instead of enumerating
    /// full triples. Same survivors, far fewer nodes.
    bool prune = true;
    /// Check consistency over pairs and singletons only (n <= 2). Shows the
    /// collapse needs the three-element menus.
    bool omit_triples = false;
    /// Survivors re-run through the generic consistency checker and the
    /// revealed preference round trip (reservoir-sampled when many).
    int crosscheck_samples = 3;
    /// Cap on survivors listed in the report; the count stays exact.
    int max_listed = 64;
    std::uint64_t seed = 42;
};

struct SurvivorRecord {
    std::string fg;
    std::string fh;
    std::string gh;
    std::optional<int> dictator;  // 1-based environment
};

struct SurvivorReport {
    int alternatives = kAlternatives;
    int environments = 0;
    AxiomSet axioms;
    bool omit_triples = false;
    bool pruned = true;
    /// Size of the raw table-triple space.
    std::uint64_t candidates_total = 0;
    /// Pruned: (fg, fh) pairs examined plus completions emitted.
    /// Unpruned: full triples examined.
    std::uint64_t nodes_explored = 0;
    std::uint64_t survivor_count = 0;
    /// True when every survivor has a dictator (vacuously true when none).
    bool all_dictatorial = true;
    /// First survivors in canonical order (ascending fg, fh, gh codes),
    /// capped at max_listed.
    std::vector<SurvivorRecord> survivors;
    int crosschecked = 0;
    double elapsed_ms = 0.0;
};

/// Enumerates table triples for the requested environments and keeps those
/// meeting the axiom set. Canonical emission order is ascending (fg, fh,
/// gh) code; pruning never changes the survivor set. Throws GuardError on
/// out-of-range domains and ValidationError when pareto is dropped without
/// the override.
SurvivorReport search_survivors(const SearchOptions& opt = {});

/// Search under {internal consistency, pareto, iih, ir}; asserts the
/// survivors are exactly the n single-environment minimizers (one dictator
/// per environment) and that each coincides with erm_single on every strict
/// profile and menu. Throws AssertionError when the search disagrees.
SurvivorReport verify_corollary(int alternatives, int environments, bool prune = true);

/// Search under all five requirements. Asserts zero survivors for n != 2
/// (trivial at n = 1, the claim at n >= 3); at n = 2 the empirical count is
/// reported without assertion.
SurvivorReport verify_theorem(int alternatives, int environments, bool prune = true);

// ---------------------------------------------------------------------------
// Decisive-set contraction trace
// ---------------------------------------------------------------------------

/// One contraction of a decisive coalition, plus the spreading of the
/// inherited pair to every ordered pair. Hypotheses are 0 = f, 1 = g,
/// 2 = h throughout; environments are 1-based.
struct ContractionStep {
    std::vector<int> coalition;    // decisive set being split
    std::vector<int> first_half;   // pins f > g > h
    std::vector<int> second_half;  // g last, f against h varies
    /// 'A': some completion lets h into the choice from {f, h}; the second
    /// half inherits (h, g). 'B': none does; the first half inherits (f, h).
    char branch = '?';
    std::vector<int> winner;
    std::array<int, 2> pair{};  // ordered pair the winner inherits
    OrdinalProfile witness;     // completion deciding the branch
    int completions = 0;        // completions examined
    bool local_check = false;   // exhaustive decisiveness of winner over pair

    /// Chain profile promoting decisiveness over `source_pair` to
    /// `target_pair`: the coalition ranks chain[0] > chain[1] > chain[2],
    /// everyone else follows outsider_order.
    struct SpreadStep {
        std::array<int, 2> source_pair{};
        std::array<int, 2> target_pair{};
        std::array<int, 3> chain{};
        std::array<int, 3> outsider_order{};
        bool local_check = false;
    };
    std::vector<SpreadStep> spreads;
};

struct DecisivenessTrace {
    std::string rule_name;
    json rule_params = json::object();
    int environments = 0;
    /// Full-coalition decisiveness over every ordered pair (unanimity).
    bool basis_validated = false;
    std::vector<ContractionStep> steps;
    int terminal = 0;  // the surviving environment, 1-based
    bool dictator_cross_checked = false;
    bool self_validated = false;
    std::uint64_t validation_checks = 0;
    double elapsed_ms = 0.0;
};

/// Shrinks the full coalition to a single decisive environment, validating
/// every claimed decisiveness exhaustively. Throws AssertionError at the
/// first step that fails to validate, which happens exactly when the rule
/// violates one of the assumed requirements. Guard: n <= 16.
DecisivenessTrace trace_decisiveness(const AggregationRule& rule, int environments);

/// Trace for the single-environment minimizer anchored at `anchor`.
DecisivenessTrace trace_decisiveness(int environments, int anchor = 1);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// kind: "survivor_report". include_timing toggles elapsed_ms; leaving it
/// out keeps rewrites byte-identical.
json to_json(const SurvivorReport& r, bool include_timing = true);

/// kind: "decisiveness_trace". Hypotheses appear by label (f, g, h).
json to_json(const DecisivenessTrace& t, bool include_timing = true);

}  // namespace choicelab::verify
