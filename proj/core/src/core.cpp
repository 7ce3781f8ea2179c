#include "choicelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace choicelab {

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

Universe::Universe(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("universe: needs at least one hypothesis");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw ValidationError("universe: empty label");
        if (!seen.insert(l).second)
            throw ValidationError("universe: duplicate label '" + l + "'");
    }
}

const std::string& Universe::label(int h) const {
    if (h < 0 || static_cast<std::size_t>(h) >= labels_.size())
        throw ValidationError("universe: hypothesis index out of range");
    return labels_[static_cast<std::size_t>(h)];
}

int Universe::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

Universe make_universe(const std::vector<std::string>& labels) { return Universe(labels); }

std::vector<std::string> default_labels(std::size_t m) {
    if (m == 0 || m > 21) throw ValidationError("default_labels: size must be in [1, 21]");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(std::string(1, char('f' + i)));
    return out;
}

// ---------------------------------------------------------------------------
// Menu / FeasibleFamily
// ---------------------------------------------------------------------------

Menu::Menu(std::vector<int> ids) : ids_(std::move(ids)) {
    if (ids_.empty()) throw ValidationError("menu: must be nonempty");
    std::sort(ids_.begin(), ids_.end());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (ids_[i] < 0) throw ValidationError("menu: negative hypothesis index");
        if (i > 0 && ids_[i] == ids_[i - 1])
            throw ValidationError("menu: duplicate hypothesis index");
    }
}

bool Menu::contains(int h) const {
    return std::binary_search(ids_.begin(), ids_.end(), h);
}

bool Menu::subset_of(const Menu& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

FeasibleFamily::FeasibleFamily(std::vector<Menu> menus, std::size_t universe_size)
    : menus_(std::move(menus)), universe_size_(universe_size) {
    if (universe_size_ == 0) throw ValidationError("family: universe size must be positive");
    for (const auto& menu : menus_) {
        if (menu.max_id() >= static_cast<int>(universe_size_))
            throw ValidationError("family: menu member outside the universe");
    }
    std::sort(menus_.begin(), menus_.end());
    for (std::size_t i = 1; i < menus_.size(); ++i)
        if (menus_[i] == menus_[i - 1]) throw ValidationError("family: duplicate menu");
}

bool FeasibleFamily::contains(const Menu& menu) const {
    return std::binary_search(menus_.begin(), menus_.end(), menu);
}

bool FeasibleFamily::complete_through_triples() const {
    const std::size_t m = universe_size_;
    std::vector<int> ids;
    for (std::size_t a = 0; a < m; ++a) {
        if (!contains(Menu{static_cast<int>(a)})) return false;
        for (std::size_t b = a + 1; b < m; ++b) {
            if (!contains(Menu{static_cast<int>(a), static_cast<int>(b)})) return false;
            for (std::size_t c = b + 1; c < m; ++c)
                if (!contains(Menu{static_cast<int>(a), static_cast<int>(b),
                                   static_cast<int>(c)}))
                    return false;
        }
    }
    return true;
}

FeasibleFamily enumerate_menus(const Universe& u, std::size_t max_size) {
    const std::size_t m = u.size();
    if (m > 20) throw GuardError("enumerate_menus: universe too large to enumerate");
    const std::size_t cap = (max_size == 0) ? m : max_size;
    if (cap == 0) throw ValidationError("enumerate_menus: max_size must be >= 1");
    std::vector<Menu> menus;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > cap) continue;
        std::vector<int> ids;
        for (std::size_t h = 0; h < m; ++h)
            if (mask & (1u << h)) ids.push_back(static_cast<int>(h));
        menus.emplace_back(std::move(ids));
    }
    return FeasibleFamily(std::move(menus), m);
}

// ---------------------------------------------------------------------------
// RiskProfile
// ---------------------------------------------------------------------------

RiskProfile::RiskProfile(int environments, std::size_t hypotheses, double fill)
    : n_(environments), m_(hypotheses) {
    if (n_ <= 0) throw ValidationError("profile: needs at least one environment");
    if (m_ == 0) throw ValidationError("profile: needs at least one hypothesis");
    values_.assign(static_cast<std::size_t>(n_) * m_, fill);
}

RiskProfile RiskProfile::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("profile: needs at least one environment");
    const std::size_t m = rows.front().size();
    if (m == 0) throw ValidationError("profile: needs at least one hypothesis");
    RiskProfile p(static_cast<int>(rows.size()), m);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        if (rows[e].size() != m)
            throw ValidationError("profile: row " + std::to_string(e + 1) +
                                  " has inconsistent length");
        for (std::size_t h = 0; h < m; ++h) p.set(static_cast<int>(e), static_cast<int>(h), rows[e][h]);
    }
    return p;
}

std::size_t RiskProfile::idx(int env, int hyp) const {
    if (env < 0 || env >= n_) throw ValidationError("profile: environment index out of range");
    if (hyp < 0 || static_cast<std::size_t>(hyp) >= m_)
        throw ValidationError("profile: hypothesis index out of range");
    return static_cast<std::size_t>(env) * m_ + static_cast<std::size_t>(hyp);
}

void RiskProfile::set(int env, int hyp, double v) {
    if (!std::isfinite(v))
        throw ValidationError("profile: non-finite risk value at environment " +
                              std::to_string(env + 1) + ", hypothesis " + std::to_string(hyp));
    values_[idx(env, hyp)] = v;
}

std::vector<std::vector<double>> RiskProfile::rows() const {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n_));
    for (int e = 0; e < n_; ++e) {
        out[static_cast<std::size_t>(e)].resize(m_);
        for (std::size_t h = 0; h < m_; ++h)
            out[static_cast<std::size_t>(e)][h] = at(e, static_cast<int>(h));
    }
    return out;
}

// ---------------------------------------------------------------------------
// OrdinalProfile
// ---------------------------------------------------------------------------

OrdinalProfile OrdinalProfile::from_ranks(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw ValidationError("ordinal profile: needs at least one environment");
    const std::size_t m = rows.front().size();
    if (m == 0) throw ValidationError("ordinal profile: needs at least one hypothesis");
    OrdinalProfile p;
    p.n_ = static_cast<int>(rows.size());
    p.m_ = m;
    p.ranks_.resize(rows.size() * m);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        if (rows[e].size() != m)
            throw ValidationError("ordinal profile: row " + std::to_string(e + 1) +
                                  " has inconsistent length");
        // Normalize arbitrary scores to dense ranks 0..k-1.
        std::vector<int> distinct(rows[e]);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (std::size_t h = 0; h < m; ++h) {
            const auto it = std::lower_bound(distinct.begin(), distinct.end(), rows[e][h]);
            p.ranks_[e * m + h] = static_cast<int>(it - distinct.begin());
        }
    }
    return p;
}

std::size_t OrdinalProfile::idx(int env, int hyp) const {
    if (env < 0 || env >= n_)
        throw ValidationError("ordinal profile: environment index out of range");
    if (hyp < 0 || static_cast<std::size_t>(hyp) >= m_)
        throw ValidationError("ordinal profile: hypothesis index out of range");
    return static_cast<std::size_t>(env) * m_ + static_cast<std::size_t>(hyp);
}

bool OrdinalProfile::strict() const {
    for (int e = 0; e < n_; ++e) {
        std::vector<bool> seen(m_, false);
        for (std::size_t h = 0; h < m_; ++h) {
            const int r = rank(e, static_cast<int>(h));
            if (seen[static_cast<std::size_t>(r)]) return false;
            seen[static_cast<std::size_t>(r)] = true;
        }
    }
    return true;
}

std::vector<std::vector<int>> OrdinalProfile::rows() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(n_));
    for (int e = 0; e < n_; ++e) {
        out[static_cast<std::size_t>(e)].resize(m_);
        for (std::size_t h = 0; h < m_; ++h)
            out[static_cast<std::size_t>(e)][h] = rank(e, static_cast<int>(h));
    }
    return out;
}

OrdinalProfile ordinalize(const RiskProfile& p) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(p.environments()));
    for (int e = 0; e < p.environments(); ++e) {
        // Dense rank by ascending risk; exact equality shares a rank.
        std::vector<double> distinct;
        distinct.reserve(p.hypotheses());
        for (std::size_t h = 0; h < p.hypotheses(); ++h)
            distinct.push_back(p.at(e, static_cast<int>(h)));
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        auto& row = rows[static_cast<std::size_t>(e)];
        row.resize(p.hypotheses());
        for (std::size_t h = 0; h < p.hypotheses(); ++h) {
            const auto it = std::lower_bound(distinct.begin(), distinct.end(),
                                             p.at(e, static_cast<int>(h)));
            row[h] = static_cast<int>(it - distinct.begin());
        }
    }
    return OrdinalProfile::from_ranks(rows);
}

RiskProfile canonical_risk(const OrdinalProfile& p) {
    RiskProfile out(p.environments(), p.hypotheses());
    for (int e = 0; e < p.environments(); ++e)
        for (std::size_t h = 0; h < p.hypotheses(); ++h)
            out.set(e, static_cast<int>(h), static_cast<double>(p.rank(e, static_cast<int>(h)) + 1));
    return out;
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

AffineTransform::AffineTransform(std::vector<std::pair<double, double>> offset_scale)
    : ps_(std::move(offset_scale)) {
    if (ps_.empty()) throw ValidationError("affine transform: needs at least one environment");
    for (const auto& [a, b] : ps_) {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw ValidationError("affine transform: non-finite parameter");
        if (b <= 0.0) throw ValidationError("affine transform: scale must be positive");
    }
}

RiskProfile apply_affine(const RiskProfile& p, const AffineTransform& t) {
    if (t.environments() != p.environments())
        throw ValidationError("apply_affine: transform covers " +
                              std::to_string(t.environments()) + " environments, profile has " +
                              std::to_string(p.environments()));
    RiskProfile out(p.environments(), p.hypotheses());
    for (int e = 0; e < p.environments(); ++e)
        for (std::size_t h = 0; h < p.hypotheses(); ++h)
            out.set(e, static_cast<int>(h), t.apply(e, p.at(e, static_cast<int>(h))));
    return out;
}

MonotoneTransform MonotoneTransform::affine(double offset, double slope) {
    if (!std::isfinite(offset) || !std::isfinite(slope) || slope <= 0.0)
        throw ValidationError("monotone transform: affine slope must be positive and finite");
    return MonotoneTransform(Kind::affine, offset, slope);
}

MonotoneTransform MonotoneTransform::cubic_plus_linear(double c) {
    if (!std::isfinite(c) || c < 0.0)
        throw ValidationError("monotone transform: cubic linear coefficient must be >= 0");
    return MonotoneTransform(Kind::cubic_plus_linear, c, 0.0);
}

MonotoneTransform MonotoneTransform::exponential() {
    return MonotoneTransform(Kind::exponential, 0.0, 0.0);
}

MonotoneTransform MonotoneTransform::arctan_plus_linear(double c) {
    if (!std::isfinite(c) || c < 0.0)
        throw ValidationError("monotone transform: arctan linear coefficient must be >= 0");
    return MonotoneTransform(Kind::arctan_plus_linear, c, 0.0);
}

double MonotoneTransform::apply(double x) const {
    switch (kind_) {
        case Kind::affine: return a_ + b_ * x;
        case Kind::cubic_plus_linear: return x * x * x + a_ * x;
        case Kind::exponential: return std::exp(x);
        case Kind::arctan_plus_linear: return std::atan(x) + a_ * x;
    }
    throw std::logic_error("monotone transform: unknown kind");
}

std::string MonotoneTransform::describe() const {
    switch (kind_) {
        case Kind::affine:
            return "affine(offset=" + std::to_string(a_) + ", slope=" + std::to_string(b_) + ")";
        case Kind::cubic_plus_linear: return "cubic_plus_linear(c=" + std::to_string(a_) + ")";
        case Kind::exponential: return "exponential";
        case Kind::arctan_plus_linear: return "arctan_plus_linear(c=" + std::to_string(a_) + ")";
    }
    return "unknown";
}

std::vector<MonotoneTransform> MonotoneTransform::catalogue() {
    return {affine(-2.0, 0.5), cubic_plus_linear(1.0), exponential(), arctan_plus_linear(1.0)};
}

std::vector<double> apply_monotone(const std::vector<double>& values,
                                   const MonotoneTransform& t) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = t.apply(values[i]);
        if (!std::isfinite(out[i]))
            throw ValidationError("apply_monotone: transform left the finite range");
    }
    return out;
}

RiskProfile apply_monotone(const RiskProfile& p, int env, const MonotoneTransform& t) {
    RiskProfile out = p;
    for (std::size_t h = 0; h < p.hypotheses(); ++h) {
        const double v = t.apply(p.at(env, static_cast<int>(h)));
        if (!std::isfinite(v))
            throw ValidationError("apply_monotone: transform left the finite range");
        out.set(env, static_cast<int>(h), v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ChoiceCorrespondence / AggregationRule
// ---------------------------------------------------------------------------

void ChoiceCorrespondence::set(const Menu& menu, const Menu& chosen) {
    if (!chosen.subset_of(menu))
        throw ValidationError("correspondence: chosen set must be a subset of its menu");
    map_[menu] = chosen;
}

const Menu& ChoiceCorrespondence::at(const Menu& menu) const {
    const auto it = map_.find(menu);
    if (it == map_.end()) throw ValidationError("correspondence: menu has no recorded choice");
    return it->second;
}

bool ChoiceCorrespondence::has(const Menu& menu) const { return map_.count(menu) > 0; }

namespace {

Menu validate_choice(const std::string& rule, const Menu& menu, Menu chosen) {
    if (!chosen.subset_of(menu))
        throw ValidationError("rule '" + rule + "': choice is not a subset of the menu");
    return chosen;
}

}  // namespace

Menu AggregationRule::choose(const RiskProfile& p, const Menu& menu) const {
    if (menu.max_id() >= static_cast<int>(p.hypotheses()))
        throw ValidationError("rule '" + name + "': menu member outside the profile");
    if (requires_positive) {
        for (int e = 0; e < p.environments(); ++e)
            for (std::size_t h = 0; h < p.hypotheses(); ++h)
                if (p.at(e, static_cast<int>(h)) <= 0.0)
                    throw ValidationError("rule '" + name +
                                          "': requires strictly positive risk values");
    }
    if (numeric_eval) return validate_choice(name, menu, numeric_eval(p, menu));
    if (ordinal_eval) return validate_choice(name, menu, ordinal_eval(ordinalize(p), menu));
    throw std::logic_error("rule '" + name + "': no evaluator");
}

Menu AggregationRule::choose(const OrdinalProfile& p, const Menu& menu) const {
    if (menu.max_id() >= static_cast<int>(p.hypotheses()))
        throw ValidationError("rule '" + name + "': menu member outside the profile");
    if (strict_ordinal_only && !p.strict())
        throw ValidationError("rule '" + name + "': requires tie-free ordinal input");
    if (ordinal_eval) return validate_choice(name, menu, ordinal_eval(p, menu));
    if (numeric_eval) return validate_choice(name, menu, numeric_eval(canonical_risk(p), menu));
    throw std::logic_error("rule '" + name + "': no evaluator");
}

ChoiceCorrespondence materialize(const AggregationRule& rule, const RiskProfile& p,
                                 const FeasibleFamily& fam) {
    ChoiceCorrespondence cc;
    for (const auto& menu : fam) cc.set(menu, rule.choose(p, menu));
    return cc;
}

ChoiceCorrespondence materialize(const AggregationRule& rule, const OrdinalProfile& p,
                                 const FeasibleFamily& fam) {
    ChoiceCorrespondence cc;
    for (const auto& menu : fam) cc.set(menu, rule.choose(p, menu));
    return cc;
}

Menu argmin_on_menu(const std::vector<double>& values, const Menu& menu) {
    double best = values.at(static_cast<std::size_t>(menu.at(0)));
    for (int h : menu) best = std::min(best, values.at(static_cast<std::size_t>(h)));
    std::vector<int> chosen;
    for (int h : menu)
        if (values.at(static_cast<std::size_t>(h)) == best) chosen.push_back(h);
    return Menu(chosen);
}

// ---------------------------------------------------------------------------
// detail
// ---------------------------------------------------------------------------

namespace detail {

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::size_t Rng::index(std::size_t bound) {
    if (bound == 0) throw std::logic_error("rng: empty range");
    return static_cast<std::size_t>(next_u64() % bound);
}

std::vector<int> Rng::permutation(std::size_t k) {
    std::vector<int> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = static_cast<int>(i);
    for (std::size_t i = k; i > 1; --i) std::swap(out[i - 1], out[index(i)]);
    return out;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
    return r.next_u64();
}

std::uint64_t factorial(std::size_t m) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= m; ++i) f *= i;
    return f;
}

const std::vector<std::vector<int>>& strict_rank_vectors(std::size_t m) {
    static std::map<std::size_t, std::vector<std::vector<int>>> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m == 0 || m > 10) throw GuardError("strict orders: universe size must be in [1, 10]");
    std::vector<int> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = static_cast<int>(i);
    std::vector<std::vector<int>> all;
    do {
        // perm lists hypotheses best-to-worst; convert to rank-by-hypothesis.
        std::vector<int> ranks(m);
        for (std::size_t pos = 0; pos < m; ++pos)
            ranks[static_cast<std::size_t>(perm[pos])] = static_cast<int>(pos);
        all.push_back(std::move(ranks));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return cache.emplace(m, std::move(all)).first->second;
}

void check_enumeration_guard(std::size_t m, int n, std::uint64_t limit,
                             const std::string& what) {
    const std::uint64_t orders = factorial(m);
    std::uint64_t total = 1;
    for (int e = 0; e < n; ++e) {
        if (total > limit / orders + 1) {
            total = limit + 1;
            break;
        }
        total *= orders;
    }
    if (total > limit)
        throw GuardError(what + ": enumeration over " + std::to_string(orders) + "^" +
                         std::to_string(n) + " strict profiles exceeds the guard of " +
                         std::to_string(limit));
}

}  // namespace detail
}  // namespace choicelab
