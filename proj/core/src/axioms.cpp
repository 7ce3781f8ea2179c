#include "choicelab/axioms.hpp"
#include "choicelab/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace choicelab::axioms {

namespace {

// Menus ordered by size then lexicographic rank, so the first failure a scan
// reports is the greedy-minimal one.
std::vector<const Menu*> by_size_then_lex(const FeasibleFamily& fam) {
    std::vector<const Menu*> order;
    order.reserve(fam.size());
    for (const auto& menu : fam) order.push_back(&menu);
    std::stable_sort(order.begin(), order.end(), [](const Menu* a, const Menu* b) {
        if (a->size() != b->size()) return a->size() < b->size();
        return *a < *b;
    });
    return order;
}

void require_choices(const ChoiceCorrespondence& cc, const FeasibleFamily& fam,
                     const char* who) {
    for (const auto& menu : fam)
        if (!cc.has(menu))
            throw ValidationError(std::string(who) + ": correspondence has no choice for a "
                                                     "menu of the family");
}

std::string ids_to_string(const Menu& menu) {
    std::string s = "{";
    for (std::size_t i = 0; i < menu.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(menu.at(i));
    }
    return s + "}";
}

}  // namespace

std::string to_string(AxiomKind k) {
    switch (k) {
        case AxiomKind::alpha: return "alpha";
        case AxiomKind::beta: return "beta";
        case AxiomKind::internal_consistency: return "internal_consistency";
        case AxiomKind::pareto: return "pareto";
        case AxiomKind::iih: return "iih";
        case AxiomKind::ir: return "ir";
        case AxiomKind::ci: return "ci";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// alpha / beta
// ---------------------------------------------------------------------------

Verdict check_alpha(const ChoiceCorrespondence& cc, const FeasibleFamily& fam) {
    require_choices(cc, fam, "check_alpha");
    const auto order = by_size_then_lex(fam);
    Verdict v;
    v.passed = true;
    for (const Menu* bigger : order) {
        const Menu& chosen_big = cc.at(*bigger);
        for (const Menu* smaller : order) {
            if (smaller->size() >= bigger->size()) break;
            if (!smaller->subset_of(*bigger)) continue;
            for (int h : chosen_big) {
                if (!smaller->contains(h)) continue;
                ++v.checked_count;
                if (!cc.at(*smaller).contains(h)) {
                    Witness w;
                    w.menus = {*bigger, *smaller};
                    w.choices = {{*bigger, chosen_big}, {*smaller, cc.at(*smaller)}};
                    w.note = "contraction violated: hypothesis " + std::to_string(h) +
                             " is chosen from " + ids_to_string(*bigger) +
                             " and available in " + ids_to_string(*smaller) +
                             " but not chosen there";
                    v.passed = false;
                    v.witness = std::move(w);
                    return v;
                }
            }
        }
    }
    return v;
}

Verdict check_beta(const ChoiceCorrespondence& cc, const FeasibleFamily& fam) {
    require_choices(cc, fam, "check_beta");
    const auto order = by_size_then_lex(fam);
    Verdict v;
    v.passed = true;
    for (const Menu* bigger : order) {
        const Menu& chosen_big = cc.at(*bigger);
        for (const Menu* smaller : order) {
            if (smaller->size() >= bigger->size()) break;
            if (!smaller->subset_of(*bigger)) continue;
            const Menu& chosen_small = cc.at(*smaller);
            int link = -1;  // some h chosen from both menus
            for (int h : chosen_small)
                if (chosen_big.contains(h)) {
                    link = h;
                    break;
                }
            if (link < 0) continue;
            for (int g : chosen_small) {
                ++v.checked_count;
                if (!chosen_big.contains(g)) {
                    Witness w;
                    w.menus = {*bigger, *smaller};
                    w.choices = {{*bigger, chosen_big}, {*smaller, chosen_small}};
                    w.note = "expansion violated: hypothesis " + std::to_string(link) +
                             " is chosen from both " + ids_to_string(*smaller) + " and " +
                             ids_to_string(*bigger) + ", yet hypothesis " + std::to_string(g) +
                             " chosen from the smaller menu is dropped from the larger one";
                    v.passed = false;
                    v.witness = std::move(w);
                    return v;
                }
            }
        }
    }
    return v;
}

Verdict check_internal_consistency(const ChoiceCorrespondence& cc, const FeasibleFamily& fam) {
    Verdict a = check_alpha(cc, fam);
    if (!a.passed) {
        a.note = "alpha failed";
        return a;
    }
    Verdict b = check_beta(cc, fam);
    b.checked_count += a.checked_count;
    if (!b.passed) b.note = "beta failed";
    return b;
}

// ---------------------------------------------------------------------------
// Pareto
// ---------------------------------------------------------------------------

namespace {

// -1: g dominates f, +1: f dominates g, 0: neither.
int dominance(const RiskProfile& p, int f, int g) {
    bool f_all = true, g_all = true;
    for (int e = 0; e < p.environments(); ++e) {
        const double rf = p.at(e, f), rg = p.at(e, g);
        if (!(rf < rg)) f_all = false;
        if (!(rg < rf)) g_all = false;
    }
    if (f_all) return 1;
    if (g_all) return -1;
    return 0;
}

}  // namespace

Verdict check_pareto(const AggregationRule& rule, const RiskProfile& p,
                     const FeasibleFamily& fam) {
    Verdict v;
    v.passed = true;
    for (const auto& menu : fam) {
        if (menu.size() != 2) continue;
        const int a = menu.at(0), b = menu.at(1);
        const int d = dominance(p, a, b);
        if (d == 0) continue;
        ++v.checked_count;
        const int winner = d > 0 ? a : b;
        const Menu chosen = rule.choose(p, menu);
        if (chosen != Menu{winner}) {
            Witness w;
            w.menus = {menu};
            w.risk_profiles = {p};
            w.choices = {{menu, chosen}};
            w.note = "hypothesis " + std::to_string(winner) +
                     " strictly dominates its rival in every environment, but the choice from " +
                     ids_to_string(menu) + " is " + ids_to_string(chosen);
            v.passed = false;
            v.witness = std::move(w);
            return v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// IIH
// ---------------------------------------------------------------------------

Verdict check_iih_pairs(const AggregationRule& rule, const FeasibleFamily& fam,
                        const std::vector<std::pair<RiskProfile, RiskProfile>>& pairs) {
    const auto order = by_size_then_lex(fam);
    Verdict v;
    v.passed = true;
    for (const auto& [p1, p2] : pairs) {
        if (!(ordinalize(p1) == ordinalize(p2)))
            throw ValidationError("check_iih: sampled pair is not ordinally equal");
        for (const Menu* menu : order) {
            ++v.checked_count;
            const Menu c1 = rule.choose(p1, *menu);
            const Menu c2 = rule.choose(p2, *menu);
            if (c1 != c2) {
                Witness w;
                w.menus = {*menu};
                w.risk_profiles = {p1, p2};
                w.choices = {{*menu, c1}, {*menu, c2}};
                w.note = "the two profiles order hypotheses identically in every environment, "
                         "yet the choice from " +
                         ids_to_string(*menu) + " moves from " + ids_to_string(c1) + " to " +
                         ids_to_string(c2);
                v.passed = false;
                v.witness = std::move(w);
                return v;
            }
        }
    }
    return v;
}

Verdict check_iih(const AggregationRule& rule, std::size_t m, int n,
                  const FeasibleFamily& fam, const IihOptions& opt) {
    if (rule.domain_kind == DomainKind::ordinal) {
        Verdict v;
        v.passed = true;
        v.checked_count = 0;
        v.note = "holds by construction: the rule reads only the per-environment orders";
        return v;
    }
    if (opt.samples <= 0) throw ValidationError("check_iih: samples must be positive");
    detail::Rng rng(opt.seed);
    std::vector<std::pair<RiskProfile, RiskProfile>> pairs;
    pairs.reserve(static_cast<std::size_t>(opt.samples));
    for (int s = 0; s < opt.samples; ++s) {
        const OrdinalProfile shape = sample::ordinal_profile(m, n, rng, opt.include_ties);
        RiskProfile p1 = sample::rescore(shape, rng, rule.requires_positive);
        RiskProfile p2 = sample::rescore(shape, rng, rule.requires_positive);
        pairs.emplace_back(std::move(p1), std::move(p2));
    }
    return check_iih_pairs(rule, fam, pairs);
}

// ---------------------------------------------------------------------------
// IR
// ---------------------------------------------------------------------------

Verdict check_ir_transforms(const AggregationRule& rule, const RiskProfile& p,
                            const FeasibleFamily& fam,
                            const std::vector<AffineTransform>& transforms) {
    const auto order = by_size_then_lex(fam);
    Verdict v;
    v.passed = true;
    for (const auto& t : transforms) {
        const RiskProfile q = apply_affine(p, t);
        for (const Menu* menu : order) {
            ++v.checked_count;
            const Menu c1 = rule.choose(p, *menu);
            const Menu c2 = rule.choose(q, *menu);
            if (c1 != c2) {
                std::ostringstream params;
                params.precision(17);
                for (int e = 0; e < t.environments(); ++e) {
                    if (e) params << "; ";
                    params << "environment " << (e + 1) << ": offset " << t.offset(e)
                           << ", scale " << t.scale(e);
                }
                Witness w;
                w.menus = {*menu};
                w.risk_profiles = {p, q};
                w.choices = {{*menu, c1}, {*menu, c2}};
                w.note = "per-environment positive affine rescaling (" + params.str() +
                         ") moves the choice from " + ids_to_string(c1) + " to " +
                         ids_to_string(c2) + " on " + ids_to_string(*menu);
                v.passed = false;
                v.witness = std::move(w);
                return v;
            }
        }
    }
    return v;
}

Verdict check_ir(const AggregationRule& rule, const RiskProfile& p,
                 const FeasibleFamily& fam, int transforms, std::uint64_t seed) {
    if (rule.domain_kind == DomainKind::ordinal)
        throw ValidationError(
            "check_ir: rescaling invariance applies to numeric rules; ordinal rules hold by "
            "construction");
    if (transforms <= 0) throw ValidationError("check_ir: transforms must be positive");
    detail::Rng rng(seed);
    std::vector<AffineTransform> ts;
    ts.reserve(static_cast<std::size_t>(transforms));
    for (int k = 0; k < transforms; ++k)
        ts.push_back(sample::affine(p.environments(), rng, rule.requires_positive));
    return check_ir_transforms(rule, p, fam, ts);
}

// ---------------------------------------------------------------------------
// Dictatorship / decisiveness
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kProfileGuard = 10'000'000ull;

// Representative strict profile realizing a per-environment direction of the
// pair (f,g): direction bit 0 means the environment ranks f above g. Other
// hypotheses are appended below the pair in ascending index order.
OrdinalProfile direction_profile(std::size_t m, int n, int f, int g,
                                 const std::vector<int>& bits) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(m));
    for (int e = 0; e < n; ++e) {
        auto& row = rows[static_cast<std::size_t>(e)];
        const bool f_better = bits[static_cast<std::size_t>(e)] == 0;
        row[static_cast<std::size_t>(f)] = f_better ? 0 : 1;
        row[static_cast<std::size_t>(g)] = f_better ? 1 : 0;
        int next = 2;
        for (std::size_t h = 0; h < m; ++h) {
            if (static_cast<int>(h) == f || static_cast<int>(h) == g) continue;
            row[h] = next++;
        }
    }
    return OrdinalProfile::from_ranks(rows);
}

bool can_use_direction_path(const AggregationRule& rule) {
    return rule.pairwise_by_direction;
}

// Enumerates strict profiles env by env from per-environment candidate order
// lists, invoking fn with the assembled profile. Returns false when fn asks
// to stop (by returning false).
bool for_each_profile(const std::vector<const std::vector<const std::vector<int>*>*>& cands,
                      std::size_t m,
                      const std::function<bool(const OrdinalProfile&)>& fn) {
    const int n = static_cast<int>(cands.size());
    std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
    while (true) {
        for (int e = 0; e < n; ++e)
            rows[static_cast<std::size_t>(e)] =
                *(*cands[static_cast<std::size_t>(e)])[pos[static_cast<std::size_t>(e)]];
        (void)m;
        if (!fn(OrdinalProfile::from_ranks(rows))) return false;
        int e = n - 1;
        while (e >= 0) {
            if (++pos[static_cast<std::size_t>(e)] <
                cands[static_cast<std::size_t>(e)]->size())
                break;
            pos[static_cast<std::size_t>(e)] = 0;
            --e;
        }
        if (e < 0) return true;
    }
}

// All strict orders, and the subset ranking f above g.
struct OrderPools {
    std::vector<const std::vector<int>*> all;
    std::vector<const std::vector<int>*> f_above_g;
};

OrderPools make_pools(std::size_t m, int f, int g) {
    OrderPools pools;
    for (const auto& ranks : detail::strict_rank_vectors(m)) {
        pools.all.push_back(&ranks);
        if (ranks[static_cast<std::size_t>(f)] < ranks[static_cast<std::size_t>(g)])
            pools.f_above_g.push_back(&ranks);
    }
    return pools;
}

bool locally_decisive_slow(const AggregationRule& rule, const EnvSet& set, int f, int g,
                           std::size_t m, int n) {
    const OrderPools pools = make_pools(m, f, g);
    std::vector<const std::vector<const std::vector<int>*>*> cands;
    for (int e = 1; e <= n; ++e)
        cands.push_back(std::binary_search(set.begin(), set.end(), e) ? &pools.f_above_g
                                                                      : &pools.all);
    const Menu pair{f, g};
    const Menu want{f};
    return for_each_profile(cands, m, [&](const OrdinalProfile& p) {
        return rule.choose(p, pair) == want;
    });
}

bool locally_decisive_fast(const AggregationRule& rule, const EnvSet& set, int f, int g,
                           std::size_t m, int n) {
    std::vector<int> free_envs;
    for (int e = 1; e <= n; ++e)
        if (!std::binary_search(set.begin(), set.end(), e)) free_envs.push_back(e);
    const Menu pair{f, g};
    const Menu want{f};
    std::vector<int> bits(static_cast<std::size_t>(n), 0);
    const std::size_t combos = 1ull << free_envs.size();
    for (std::size_t c = 0; c < combos; ++c) {
        for (std::size_t i = 0; i < free_envs.size(); ++i)
            bits[static_cast<std::size_t>(free_envs[i] - 1)] = (c >> i) & 1 ? 1 : 0;
        const OrdinalProfile p = direction_profile(m, n, f, g, bits);
        if (!(rule.choose(p, pair) == want)) return false;
    }
    return true;
}

void validate_pair_args(const EnvSet& set, int f, int g, std::size_t m, int n) {
    if (set.empty()) throw ValidationError("decisiveness: environment set must be nonempty");
    if (!std::is_sorted(set.begin(), set.end()) ||
        std::adjacent_find(set.begin(), set.end()) != set.end())
        throw ValidationError("decisiveness: environment set must be ascending and distinct");
    if (set.front() < 1 || set.back() > n)
        throw ValidationError("decisiveness: environment numbers must lie in [1, n]");
    if (f == g || f < 0 || g < 0 || static_cast<std::size_t>(f) >= m ||
        static_cast<std::size_t>(g) >= m)
        throw ValidationError("decisiveness: pair must name two distinct hypotheses");
}

}  // namespace

bool is_locally_decisive(const AggregationRule& rule, const EnvSet& set, int f, int g,
                         std::size_t m, int n) {
    validate_pair_args(set, f, g, m, n);
    if (can_use_direction_path(rule)) return locally_decisive_fast(rule, set, f, g, m, n);
    detail::check_enumeration_guard(m, n, kProfileGuard, "is_locally_decisive");
    return locally_decisive_slow(rule, set, f, g, m, n);
}

std::optional<int> find_dictator(const AggregationRule& rule, std::size_t m, int n) {
    if (m < 2) throw ValidationError("find_dictator: needs at least two hypotheses");
    if (n < 1) throw ValidationError("find_dictator: needs at least one environment");
    if (!can_use_direction_path(rule))
        detail::check_enumeration_guard(m, n, kProfileGuard, "find_dictator");
    for (int i = 1; i <= n; ++i) {
        bool dictator = true;
        for (int f = 0; dictator && f < static_cast<int>(m); ++f)
            for (int g = 0; dictator && g < static_cast<int>(m); ++g) {
                if (f == g) continue;
                if (!is_locally_decisive(rule, EnvSet{i}, f, g, m, n)) dictator = false;
            }
        if (dictator) return i;
    }
    return std::nullopt;
}

std::vector<EnvSet> decisive_sets(const AggregationRule& rule, std::size_t m, int n) {
    if (n < 1) throw ValidationError("decisive_sets: needs at least one environment");
    std::vector<EnvSet> subsets;
    for (int size = 1; size <= n; ++size) {
        std::vector<int> combo(static_cast<std::size_t>(size));
        // Lexicographic combinations of the given size.
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == size) {
                subsets.push_back(combo);
                return;
            }
            for (int e = start; e <= n; ++e) {
                combo[static_cast<std::size_t>(depth)] = e;
                rec(e + 1, depth + 1);
            }
        };
        rec(1, 0);
    }
    std::vector<EnvSet> out;
    for (const auto& set : subsets) {
        bool decisive = true;
        for (int f = 0; decisive && f < static_cast<int>(m); ++f)
            for (int g = 0; decisive && g < static_cast<int>(m); ++g) {
                if (f == g) continue;
                if (!is_locally_decisive(rule, set, f, g, m, n)) decisive = false;
            }
        if (decisive) out.push_back(set);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness replay
// ---------------------------------------------------------------------------

namespace {

std::size_t witness_universe_size(const Witness& w) {
    int top = -1;
    for (const auto& menu : w.menus) top = std::max(top, menu.max_id());
    for (const auto& [menu, chosen] : w.choices) top = std::max(top, menu.max_id());
    return static_cast<std::size_t>(top + 1);
}

bool replay_consistency(AxiomKind kind, const Witness& w) {
    ChoiceCorrespondence cc;
    for (const auto& [menu, chosen] : w.choices) cc.set(menu, chosen);
    FeasibleFamily fam(w.menus, witness_universe_size(w));
    switch (kind) {
        case AxiomKind::alpha: return !check_alpha(cc, fam).passed;
        case AxiomKind::beta: return !check_beta(cc, fam).passed;
        default: return !check_internal_consistency(cc, fam).passed;
    }
}

}  // namespace

bool witness_replays(AxiomKind kind, const Witness& w, const AggregationRule* rule,
                     std::size_t m, int n) {
    switch (kind) {
        case AxiomKind::alpha:
        case AxiomKind::beta:
        case AxiomKind::internal_consistency:
            return replay_consistency(kind, w);
        case AxiomKind::pareto: {
            if (!rule || w.risk_profiles.empty() || w.menus.empty()) return false;
            FeasibleFamily fam(w.menus, w.risk_profiles[0].hypotheses());
            return !check_pareto(*rule, w.risk_profiles[0], fam).passed;
        }
        case AxiomKind::iih: {
            if (!rule || w.risk_profiles.size() < 2 || w.menus.empty()) return false;
            FeasibleFamily fam(w.menus, w.risk_profiles[0].hypotheses());
            return !check_iih_pairs(*rule, fam, {{w.risk_profiles[0], w.risk_profiles[1]}})
                        .passed;
        }
        case AxiomKind::ir: {
            if (!rule || w.risk_profiles.size() < 2 || w.menus.empty()) return false;
            // The transformed profile is stored, so replay compares choices
            // directly instead of resampling transforms.
            for (const auto& menu : w.menus)
                if (!(rule->choose(w.risk_profiles[0], menu) ==
                      rule->choose(w.risk_profiles[1], menu)))
                    return true;
            return false;
        }
        case AxiomKind::ci: {
            if (!rule || m < 2 || n < 1) return false;
            return find_dictator(*rule, m, n).has_value();
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

namespace sample {

RiskProfile profile(std::size_t m, int n, detail::Rng& rng) {
    RiskProfile p(n, m);
    for (int e = 0; e < n; ++e)
        for (std::size_t h = 0; h < m; ++h)
            p.set(e, static_cast<int>(h), rng.uniform(0.1, 10.0));
    return p;
}

OrdinalProfile ordinal_profile(std::size_t m, int n, detail::Rng& rng, bool include_ties) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        auto& row = rows[static_cast<std::size_t>(e)];
        if (include_ties) {
            // Random scores over a small range create tied ranks regularly.
            row.resize(m);
            for (std::size_t h = 0; h < m; ++h)
                row[h] = static_cast<int>(rng.index(std::max<std::size_t>(2, m)));
        } else {
            row = rng.permutation(m);
        }
    }
    return OrdinalProfile::from_ranks(rows);
}

RiskProfile rescore(const OrdinalProfile& p, detail::Rng& rng, bool positive) {
    RiskProfile out(p.environments(), p.hypotheses());
    for (int e = 0; e < p.environments(); ++e) {
        int levels = 0;
        for (std::size_t h = 0; h < p.hypotheses(); ++h)
            levels = std::max(levels, p.rank(e, static_cast<int>(h)) + 1);
        // Strictly increasing values, one per rank level.
        std::vector<double> values(static_cast<std::size_t>(levels));
        do {
            for (auto& v : values)
                v = positive ? rng.uniform(0.05, 20.0) : rng.uniform(-10.0, 10.0);
            std::sort(values.begin(), values.end());
        } while (std::adjacent_find(values.begin(), values.end()) != values.end());
        for (std::size_t h = 0; h < p.hypotheses(); ++h)
            out.set(e, static_cast<int>(h),
                    values[static_cast<std::size_t>(p.rank(e, static_cast<int>(h)))]);
    }
    return out;
}

AffineTransform affine(int n, detail::Rng& rng, bool nonnegative_offsets) {
    std::vector<std::pair<double, double>> ps;
    ps.reserve(static_cast<std::size_t>(n));
    const double log_lo = std::log(0.01), log_hi = std::log(100.0);
    for (int e = 0; e < n; ++e) {
        const double offset =
            nonnegative_offsets ? rng.uniform(0.0, 10.0) : rng.uniform(-10.0, 10.0);
        const double scale = std::exp(rng.uniform(log_lo, log_hi));
        ps.emplace_back(offset, scale);
    }
    return AffineTransform(std::move(ps));
}

}  // namespace sample

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

json to_json(const Witness& w, const Universe& u) {
    json profiles = json::array();
    for (const auto& p : w.risk_profiles)
        profiles.push_back(json{{"type", "risk"}, {"values", p.rows()}});
    for (const auto& p : w.ordinal_profiles)
        profiles.push_back(json{{"type", "ordinal"}, {"ranks", p.rows()}});
    json menus = json::array();
    for (const auto& menu : w.menus) menus.push_back(io::menu_to_json(menu, u));
    json choices = json::array();
    for (const auto& [menu, chosen] : w.choices)
        choices.push_back(json{{"menu", io::menu_to_json(menu, u)},
                               {"chosen", io::menu_to_json(chosen, u)}});
    return json{{"menus", menus}, {"profiles", profiles}, {"choices", choices},
                {"note", w.note}};
}

json to_json(const Verdict& v, AxiomKind kind, const Universe& u) {
    json out{{"axiom", to_string(kind)}, {"passed", v.passed},
             {"checked_count", v.checked_count}};
    if (v.witness) out["witness"] = to_json(*v.witness, u);
    if (!v.note.empty()) out["note"] = v.note;
    return out;
}

}  // namespace choicelab::axioms
