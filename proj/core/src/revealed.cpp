#include "choicelab/revealed.hpp"

#include <algorithm>

namespace choicelab::revealed {

RevealedPreference::RevealedPreference(std::size_t m) : m_(m), geq_(m * m, false) {
    if (m == 0) throw ValidationError("revealed: universe must be nonempty");
    for (std::size_t h = 0; h < m; ++h) geq_[h * m + h] = true;
}

bool RevealedPreference::geq(int f, int g) const {
    if (f < 0 || g < 0 || static_cast<std::size_t>(f) >= m_ ||
        static_cast<std::size_t>(g) >= m_)
        throw ValidationError("revealed: hypothesis index out of range");
    return geq_[static_cast<std::size_t>(f) * m_ + static_cast<std::size_t>(g)];
}

void RevealedPreference::set_geq(int f, int g, bool v) {
    if (f < 0 || g < 0 || static_cast<std::size_t>(f) >= m_ ||
        static_cast<std::size_t>(g) >= m_)
        throw ValidationError("revealed: hypothesis index out of range");
    if (f == g && !v) throw ValidationError("revealed: the relation is reflexive");
    geq_[static_cast<std::size_t>(f) * m_ + static_cast<std::size_t>(g)] = v;
}

RevealedPreference RevealedPreference::from_ranks(const std::vector<int>& ranks) {
    RevealedPreference r(ranks.size());
    for (std::size_t f = 0; f < ranks.size(); ++f)
        for (std::size_t g = 0; g < ranks.size(); ++g)
            r.set_geq(static_cast<int>(f), static_cast<int>(g), ranks[f] <= ranks[g]);
    return r;
}

std::vector<int> RevealedPreference::to_ranks() const {
    if (!check_complete_transitive(*this).passed)
        throw ValidationError("revealed: ranks need a complete transitive relation");
    // Rank = number of strictly better hypotheses, densified.
    std::vector<int> raw(m_, 0);
    for (std::size_t h = 0; h < m_; ++h)
        for (std::size_t o = 0; o < m_; ++o)
            if (strictly(static_cast<int>(o), static_cast<int>(h))) ++raw[h];
    std::vector<int> distinct(raw);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> ranks(m_);
    for (std::size_t h = 0; h < m_; ++h)
        ranks[h] = static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(), raw[h]) - distinct.begin());
    return ranks;
}

std::vector<std::vector<bool>> RevealedPreference::matrix() const {
    std::vector<std::vector<bool>> out(m_, std::vector<bool>(m_));
    for (std::size_t f = 0; f < m_; ++f)
        for (std::size_t g = 0; g < m_; ++g)
            out[f][g] = geq_[f * m_ + g];
    return out;
}

RevealedPreference reveal(const ChoiceCorrespondence& cc, std::size_t m) {
    RevealedPreference r(m);
    for (std::size_t f = 0; f < m; ++f) {
        for (std::size_t g = f + 1; g < m; ++g) {
            const Menu pair{static_cast<int>(f), static_cast<int>(g)};
            if (!cc.has(pair))
                throw ValidationError("reveal: correspondence lacks a choice for pair " +
                                      std::to_string(f) + "," + std::to_string(g));
            const Menu& chosen = cc.at(pair);
            r.set_geq(static_cast<int>(f), static_cast<int>(g),
                      chosen.contains(static_cast<int>(f)));
            r.set_geq(static_cast<int>(g), static_cast<int>(f),
                      chosen.contains(static_cast<int>(g)));
        }
    }
    return r;
}

axioms::Verdict check_complete_transitive(const RevealedPreference& r) {
    axioms::Verdict v;
    v.passed = true;
    const int m = static_cast<int>(r.hypotheses());
    for (int f = 0; f < m; ++f)
        for (int g = f + 1; g < m; ++g) {
            ++v.checked_count;
            if (!r.geq(f, g) && !r.geq(g, f)) {
                axioms::Witness w;
                w.note = "incomplete: hypotheses " + std::to_string(f) + " and " +
                         std::to_string(g) + " are unranked against each other";
                v.passed = false;
                v.witness = std::move(w);
                return v;
            }
        }
    for (int f = 0; f < m; ++f)
        for (int g = 0; g < m; ++g) {
            if (g == f) continue;
            for (int h = 0; h < m; ++h) {
                if (h == f || h == g) continue;
                ++v.checked_count;
                if (r.geq(f, g) && r.geq(g, h) && !r.geq(f, h)) {
                    axioms::Witness w;
                    w.note = "intransitive: " + std::to_string(f) + " >= " + std::to_string(g) +
                             " and " + std::to_string(g) + " >= " + std::to_string(h) +
                             " but not " + std::to_string(f) + " >= " + std::to_string(h);
                    v.passed = false;
                    v.witness = std::move(w);
                    return v;
                }
            }
        }
    return v;
}

ChoiceCorrespondence rationalize(const RevealedPreference& r, const FeasibleFamily& fam) {
    if (fam.universe_size() != r.hypotheses())
        throw ValidationError("rationalize: family and relation sizes differ");
    ChoiceCorrespondence cc;
    for (const auto& menu : fam) {
        std::vector<int> maximal;
        for (int h : menu) {
            bool top = true;
            for (int o : menu)
                if (!r.geq(h, o)) {
                    top = false;
                    break;
                }
            if (top) maximal.push_back(h);
        }
        if (maximal.empty())
            throw ValidationError(
                "rationalize: relation leaves a menu without maximal elements (not "
                "complete and transitive)");
        cc.set(menu, Menu(maximal));
    }
    return cc;
}

axioms::Verdict roundtrip_check(const ChoiceCorrespondence& cc, const FeasibleFamily& fam,
                                std::size_t m) {
    axioms::Verdict v;
    const RevealedPreference r = reveal(cc, m);
    const axioms::Verdict ct = check_complete_transitive(r);
    if (!ct.passed) {
        v.passed = false;
        v.checked_count = ct.checked_count;
        v.witness = ct.witness;
        v.note = "revealed relation is not complete and transitive";
        return v;
    }
    const ChoiceCorrespondence regenerated = rationalize(r, fam);
    v.passed = true;
    v.checked_count = ct.checked_count;
    for (const auto& menu : fam) {
        ++v.checked_count;
        if (!(regenerated.at(menu) == cc.at(menu))) {
            axioms::Witness w;
            w.menus = {menu};
            w.choices = {{menu, cc.at(menu)}, {menu, regenerated.at(menu)}};
            w.note = "maximal elements of the revealed relation disagree with the recorded "
                     "choice on this menu";
            v.passed = false;
            v.witness = std::move(w);
            return v;
        }
    }
    return v;
}

}  // namespace choicelab::revealed
