/// @file core.hpp
/// Finite universes of hypotheses, menus, risk profiles, ordinal profiles,
/// choice correspondences, and aggregation rules.
///
/// Conventions used across the library:
///  - hypotheses are identified by their index into the universe (0-based),
///  - environments are numbered 1..n on every user-facing surface (rule
///    factories, dictator indices, decisive sets, reports); raw matrix row
///    access stays 0-based,
///  - lower risk is better everywhere,
///  - ties are decided by exact floating point equality, never by epsilon,
///  - hypotheses and menus are kept in canonical order (ascending index,
///    menus lexicographic on their member lists) so output is byte-stable.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace choicelab {

using json = nlohmann::json;

/// Input that violates a documented precondition.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Request whose exhaustive cost exceeds a documented enumeration guard.
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mechanically checked claim that failed.
struct AssertionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Universe and menus
// ---------------------------------------------------------------------------

/// Ordered list of hypothesis labels; the index is the identifier.
class Universe {
  public:
    Universe() = default;
    explicit Universe(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(int h) const;
    const std::vector<std::string>& labels() const { return labels_; }
    int index_of(const std::string& label) const;  // -1 when absent

  private:
    std::vector<std::string> labels_;
};

/// make_universe(["f","g","h"]) names hypotheses 0,1,2.
Universe make_universe(const std::vector<std::string>& labels);

/// Default label scheme: consecutive letters starting at 'f'.
std::vector<std::string> default_labels(std::size_t m);

/// Nonempty set of hypothesis indices, stored sorted and duplicate-free.
/// Also used for chosen sets, which share the same structure.
class Menu {
  public:
    Menu() = default;
    /// Sorts and validates; indices must be >= 0 and distinct.
    explicit Menu(std::vector<int> ids);
    Menu(std::initializer_list<int> ids) : Menu(std::vector<int>(ids)) {}

    std::size_t size() const { return ids_.size(); }
    const std::vector<int>& ids() const { return ids_; }
    int at(std::size_t i) const { return ids_.at(i); }
    bool contains(int h) const;
    bool subset_of(const Menu& other) const;
    int max_id() const { return ids_.empty() ? -1 : ids_.back(); }

    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    /// Lexicographic on the sorted member list; the canonical menu order.
    bool operator<(const Menu& o) const { return ids_ < o.ids_; }
    bool operator==(const Menu& o) const { return ids_ == o.ids_; }
    bool operator!=(const Menu& o) const { return ids_ != o.ids_; }

  private:
    std::vector<int> ids_;
};

/// Duplicate-free collection of menus over one universe, canonically ordered.
class FeasibleFamily {
  public:
    FeasibleFamily() = default;
    /// Sorts, rejects duplicates and menus outside [0, universe_size).
    FeasibleFamily(std::vector<Menu> menus, std::size_t universe_size);

    std::size_t size() const { return menus_.size(); }
    std::size_t universe_size() const { return universe_size_; }
    const std::vector<Menu>& menus() const { return menus_; }
    bool contains(const Menu& menu) const;

    /// True when every singleton, pair, and triple of the universe is
    /// present (the default family shape; checkers also accept smaller
    /// families, e.g. when replaying witnesses).
    bool complete_through_triples() const;

    auto begin() const { return menus_.begin(); }
    auto end() const { return menus_.end(); }

  private:
    std::vector<Menu> menus_;
    std::size_t universe_size_ = 0;
};

/// All nonempty menus of size <= max_size (0 = no cap), canonical order.
FeasibleFamily enumerate_menus(const Universe& u, std::size_t max_size = 0);

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

/// n x m matrix of finite risk values; rows are environments, columns
/// hypotheses. Lower is better.
class RiskProfile {
  public:
    RiskProfile() = default;
    RiskProfile(int environments, std::size_t hypotheses, double fill = 0.0);
    /// All rows must share the same length; every entry must be finite.
    static RiskProfile from_rows(const std::vector<std::vector<double>>& rows);

    int environments() const { return n_; }
    std::size_t hypotheses() const { return m_; }
    double at(int env, int hyp) const { return values_.at(idx(env, hyp)); }
    void set(int env, int hyp, double v);
    std::vector<std::vector<double>> rows() const;

    bool operator==(const RiskProfile& o) const = default;

  private:
    std::size_t idx(int env, int hyp) const;
    int n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> values_;
};

/// Per-environment weak orders as dense ranks (0 = best, ties share a rank).
class OrdinalProfile {
  public:
    OrdinalProfile() = default;
    /// Accepts arbitrary integer scores per row; normalizes to dense ranks.
    static OrdinalProfile from_ranks(const std::vector<std::vector<int>>& rows);

    int environments() const { return n_; }
    std::size_t hypotheses() const { return m_; }
    int rank(int env, int hyp) const { return ranks_.at(idx(env, hyp)); }
    /// True when env ranks f strictly above g (lower rank).
    bool better(int env, int f, int g) const { return rank(env, f) < rank(env, g); }
    bool tied(int env, int f, int g) const { return rank(env, f) == rank(env, g); }
    /// No ties in any environment.
    bool strict() const;
    std::vector<std::vector<int>> rows() const;

    bool operator==(const OrdinalProfile& o) const = default;

  private:
    std::size_t idx(int env, int hyp) const;
    int n_ = 0;
    std::size_t m_ = 0;
    std::vector<int> ranks_;
};

/// Per-environment weak orders of a risk profile. Exact value equality is a
/// tie; lower value means better rank.
OrdinalProfile ordinalize(const RiskProfile& p);

/// Canonical numeric representative of an ordinal profile: risk = rank + 1.
/// Strictly positive, so positive-domain rules stay in-domain.
RiskProfile canonical_risk(const OrdinalProfile& p);

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

/// Per-environment positive affine maps r -> offset + scale * r, scale > 0.
class AffineTransform {
  public:
    AffineTransform() = default;
    explicit AffineTransform(std::vector<std::pair<double, double>> offset_scale);

    int environments() const { return static_cast<int>(ps_.size()); }
    double offset(int env) const { return ps_.at(env).first; }
    double scale(int env) const { return ps_.at(env).second; }
    double apply(int env, double v) const { return offset(env) + scale(env) * v; }

  private:
    std::vector<std::pair<double, double>> ps_;
};

/// Applies t environment-wise; t must cover exactly p's environments.
RiskProfile apply_affine(const RiskProfile& p, const AffineTransform& t);

/// Catalogue of strictly increasing scalar maps used to probe ordinal
/// invariance beyond the affine family.
class MonotoneTransform {
  public:
    enum class Kind { affine, cubic_plus_linear, exponential, arctan_plus_linear };

    static MonotoneTransform affine(double offset, double slope);        // slope > 0
    static MonotoneTransform cubic_plus_linear(double c);                // c >= 0
    static MonotoneTransform exponential();
    static MonotoneTransform arctan_plus_linear(double c);               // c >= 0

    double apply(double x) const;
    Kind kind() const { return kind_; }
    std::string describe() const;

    /// One representative instance per kind.
    static std::vector<MonotoneTransform> catalogue();

  private:
    MonotoneTransform(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
};

/// Element-wise application to a risk functional (one vector of values).
std::vector<double> apply_monotone(const std::vector<double>& values,
                                   const MonotoneTransform& t);
/// Application to a single environment's row of a profile.
RiskProfile apply_monotone(const RiskProfile& p, int env, const MonotoneTransform& t);

// ---------------------------------------------------------------------------
// Choice correspondences and aggregation rules
// ---------------------------------------------------------------------------

/// Map from menus to nonempty chosen subsets, canonically ordered.
class ChoiceCorrespondence {
  public:
    ChoiceCorrespondence() = default;

    /// chosen must be a nonempty subset of menu.
    void set(const Menu& menu, const Menu& chosen);
    const Menu& at(const Menu& menu) const;
    bool has(const Menu& menu) const;
    std::size_t size() const { return map_.size(); }

    auto begin() const { return map_.begin(); }
    auto end() const { return map_.end(); }

    bool operator==(const ChoiceCorrespondence& o) const { return map_ == o.map_; }

  private:
    std::map<Menu, Menu> map_;
};

/// Domain a rule consumes directly.
enum class DomainKind { numeric, ordinal };

/// A named rule mapping (profile, menu) to a nonempty chosen subset.
///
/// Numeric rules read risk values; ordinal rules read only the per-
/// environment orders. Either may be evaluated on the other profile kind:
/// numeric rules see the canonical numeric representative of an ordinal
/// profile (rank + 1), ordinal rules see ordinalize(p).
class AggregationRule {
  public:
    std::string name;
    json params = json::object();
    DomainKind domain_kind = DomainKind::numeric;
    /// Rule only accepts strictly positive risk values (nash_product).
    bool requires_positive = false;
    /// Rule rejects ties in ordinal input (borda).
    bool strict_ordinal_only = false;
    /// On two-element menus the choice depends only on the per-environment
    /// direction of that pair; enables fast decisiveness enumeration.
    bool pairwise_by_direction = false;

    std::function<Menu(const RiskProfile&, const Menu&)> numeric_eval;
    std::function<Menu(const OrdinalProfile&, const Menu&)> ordinal_eval;

    /// Evaluate and validate: result nonempty, subset of menu.
    Menu choose(const RiskProfile& p, const Menu& menu) const;
    Menu choose(const OrdinalProfile& p, const Menu& menu) const;
};

/// Evaluate the rule on every menu of the family.
ChoiceCorrespondence materialize(const AggregationRule& rule, const RiskProfile& p,
                                 const FeasibleFamily& fam);
ChoiceCorrespondence materialize(const AggregationRule& rule, const OrdinalProfile& p,
                                 const FeasibleFamily& fam);

/// Argmin set of values restricted to menu (exact ties kept together).
Menu argmin_on_menu(const std::vector<double>& values, const Menu& menu);

namespace detail {

/// Deterministic splitmix64-based generator. Used instead of <random>
/// distributions so that (spec, seed) regeneration is bit-identical and
/// independent of the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01();
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller.
    double normal();
    /// Uniform integer in [0, bound).
    std::size_t index(std::size_t bound);
    /// Random permutation of 0..k-1.
    std::vector<int> permutation(std::size_t k);

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// All rank vectors of strict orders over m hypotheses, lexicographic by
/// the underlying permutation. factorial(m) entries.
const std::vector<std::vector<int>>& strict_rank_vectors(std::size_t m);

std::uint64_t factorial(std::size_t m);

/// Throws GuardError when orders^envs exceeds limit.
void check_enumeration_guard(std::size_t m, int n, std::uint64_t limit,
                             const std::string& what);

}  // namespace detail
}  // namespace choicelab
