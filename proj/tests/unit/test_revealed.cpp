#include <doctest.h>

#include <set>
#include <vector>

#include "choicelab/revealed.hpp"

using namespace choicelab;
using revealed::RevealedPreference;

namespace {

const Universe kU3 = make_universe(default_labels(3));
const FeasibleFamily kFull3 = enumerate_menus(kU3);

/// All 189 correspondences on the full three-element family with forced
/// singleton choices: 3 options per pair menu, 7 nonempty triple choices.
std::vector<ChoiceCorrespondence> all_candidate_ccs() {
    const std::vector<Menu> pair_menus = {Menu{0, 1}, Menu{0, 2}, Menu{1, 2}};
    std::vector<std::vector<Menu>> pair_options;
    for (const Menu& pm : pair_menus) {
        const auto ids = pm.ids();
        pair_options.push_back({Menu{ids[0]}, Menu{ids[1]}, pm});
    }
    std::vector<Menu> triple_options;
    for (int mask = 1; mask < 8; ++mask) {
        std::vector<int> ids;
        for (int h = 0; h < 3; ++h)
            if (mask & (1 << h)) ids.push_back(h);
        triple_options.push_back(Menu{ids});
    }

    std::vector<ChoiceCorrespondence> out;
    for (const Menu& c01 : pair_options[0])
        for (const Menu& c02 : pair_options[1])
            for (const Menu& c12 : pair_options[2])
                for (const Menu& ct : triple_options) {
                    ChoiceCorrespondence cc;
                    for (int h = 0; h < 3; ++h) cc.set(Menu{h}, Menu{h});
                    cc.set(pair_menus[0], c01);
                    cc.set(pair_menus[1], c02);
                    cc.set(pair_menus[2], c12);
                    cc.set(Menu{0, 1, 2}, ct);
                    out.push_back(std::move(cc));
                }
    return out;
}

}  // namespace

TEST_SUITE("revealed") {

TEST_CASE("ranks round-trip through the relation") {
    const std::vector<int> ranks = {1, 0, 1};  // g best, f and h tied below
    const auto r = RevealedPreference::from_ranks(ranks);
    CHECK(r.strictly(1, 0));
    CHECK(r.indifferent(0, 2));
    CHECK(r.geq(0, 0));
    CHECK_EQ(r.to_ranks(), ranks);
    CHECK(revealed::check_complete_transitive(r).passed);
}

TEST_CASE("to_ranks rejects an intransitive relation") {
    RevealedPreference r(3);
    // cycle: f > g > h > f
    r.set_geq(0, 1, true);
    r.set_geq(1, 2, true);
    r.set_geq(2, 0, true);
    r.set_geq(1, 0, false);
    r.set_geq(2, 1, false);
    r.set_geq(0, 2, false);
    const auto v = revealed::check_complete_transitive(r);
    CHECK_FALSE(v.passed);
    REQUIRE(v.witness.has_value());
    CHECK_THROWS_AS(r.to_ranks(), ValidationError);
}

TEST_CASE("reveal reads pairwise choices and demands all of them") {
    ChoiceCorrespondence cc;
    cc.set(Menu{0, 1}, Menu{0});
    cc.set(Menu{0, 2}, Menu{0, 2});
    cc.set(Menu{1, 2}, Menu{2});
    const auto r = revealed::reveal(cc, 3);
    CHECK(r.strictly(0, 1));
    CHECK(r.indifferent(0, 2));
    CHECK(r.strictly(2, 1));

    ChoiceCorrespondence partial;
    partial.set(Menu{0, 1}, Menu{0});
    CHECK_THROWS_AS(revealed::reveal(partial, 3), ValidationError);
}

TEST_CASE("rationalize picks maximal elements menu by menu") {
    const auto r = RevealedPreference::from_ranks({0, 1, 1});
    const auto cc = revealed::rationalize(r, kFull3);
    CHECK_EQ(cc.at(Menu{0, 1}), Menu{0});
    CHECK_EQ(cc.at(Menu{1, 2}), (Menu{1, 2}));
    CHECK_EQ(cc.at(Menu{0, 1, 2}), Menu{0});
    CHECK(revealed::roundtrip_check(cc, kFull3, 3).passed);
}

TEST_CASE("consistency and rationalizability coincide on the full family") {
    const auto candidates = all_candidate_ccs();
    REQUIRE_EQ(candidates.size(), 189);

    std::size_t passing = 0;
    std::set<std::vector<std::vector<bool>>> passing_relations;
    for (const auto& cc : candidates) {
        const bool consistent = axioms::check_internal_consistency(cc, kFull3).passed;
        const bool rational = revealed::roundtrip_check(cc, kFull3, 3).passed;
        CHECK_EQ(consistent, rational);
        if (consistent) {
            ++passing;
            passing_relations.insert(revealed::reveal(cc, 3).matrix());
        }
    }

    // one rationalizable correspondence per weak order on three elements
    CHECK_EQ(passing, 13);
    CHECK_EQ(passing_relations.size(), 13);

    // independent count: distinct dense rank vectors over three hypotheses
    std::set<std::vector<int>> weak_orders;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const std::vector<int> ranks = {a, b, c};
                const int top = std::max({a, b, c});
                bool dense = true;
                for (int k = 0; k <= top; ++k)
                    dense = dense &&
                            (a == k || b == k || c == k);
                if (dense) weak_orders.insert(ranks);
            }
    CHECK_EQ(weak_orders.size(), 13);

    // every weak order's rationalization is one of the 13 survivors
    for (const auto& ranks : weak_orders) {
        const auto cc = revealed::rationalize(RevealedPreference::from_ranks(ranks), kFull3);
        CHECK(passing_relations.count(revealed::reveal(cc, 3).matrix()) == 1);
    }
}

TEST_CASE("roundtrip check reports the offending menu") {
    ChoiceCorrespondence cc;
    for (int h = 0; h < 3; ++h) cc.set(Menu{h}, Menu{h});
    cc.set(Menu{0, 1}, Menu{0});
    cc.set(Menu{0, 2}, Menu{0});
    cc.set(Menu{1, 2}, Menu{1});
    cc.set(Menu{0, 1, 2}, Menu{1});  // revealed relation says {0}
    const auto v = revealed::roundtrip_check(cc, kFull3, 3);
    CHECK_FALSE(v.passed);
    REQUIRE(v.witness.has_value());
}

}  // TEST_SUITE
