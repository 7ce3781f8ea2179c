#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "choicelab/core.hpp"

using namespace choicelab;

TEST_SUITE("core") {

TEST_CASE("menus canonicalize and validate") {
    Menu m{2, 0, 1};
    CHECK_EQ(m.ids(), std::vector<int>{0, 1, 2});
    CHECK(m.contains(1));
    CHECK_FALSE(m.contains(3));
    CHECK(Menu{0, 2}.subset_of(m));
    CHECK_FALSE(m.subset_of(Menu{0, 2}));
    CHECK(Menu{1} < Menu{2});
    CHECK(Menu{0} < Menu{0, 1});

    CHECK_THROWS_AS(Menu(std::vector<int>{}), ValidationError);
    CHECK_THROWS_AS(Menu{-1}, ValidationError);
    CHECK_THROWS_AS((Menu{1, 1}), ValidationError);
}

TEST_CASE("menu families enumerate and answer membership") {
    const Universe u = make_universe(default_labels(3));
    const FeasibleFamily full = enumerate_menus(u);
    CHECK_EQ(full.size(), 7);
    CHECK(full.complete_through_triples());
    CHECK(full.contains(Menu{0, 2}));

    const FeasibleFamily pairs = enumerate_menus(u, 2);
    CHECK_EQ(pairs.size(), 6);
    CHECK_FALSE(pairs.contains(Menu{0, 1, 2}));
    CHECK_FALSE(pairs.complete_through_triples());

    CHECK_THROWS_AS(FeasibleFamily({Menu{0}, Menu{0}}, 3), ValidationError);
    CHECK_THROWS_AS(FeasibleFamily({Menu{5}}, 3), ValidationError);
    CHECK_THROWS_AS(make_universe({"f", "f"}), ValidationError);
}

TEST_CASE("risk profiles hold finite rectangular values") {
    const RiskProfile p = RiskProfile::from_rows({{1.0, 2.0, 3.0}, {0.5, 0.5, 0.25}});
    CHECK_EQ(p.environments(), 2);
    CHECK_EQ(p.hypotheses(), 3);
    CHECK_EQ(p.at(1, 2), 0.25);

    CHECK_THROWS_AS(RiskProfile::from_rows({{1.0}, {1.0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(RiskProfile::from_rows({{1.0, std::nan("")}}), ValidationError);
    CHECK_THROWS_AS(RiskProfile::from_rows({}), ValidationError);
    CHECK_THROWS_AS(p.at(2, 0), ValidationError);
}

TEST_CASE("ordinal profiles normalize scores to dense ranks") {
    const OrdinalProfile p = OrdinalProfile::from_ranks({{10, -5, 10}, {7, 8, 9}});
    CHECK_EQ(p.rank(0, 0), 1);
    CHECK_EQ(p.rank(0, 1), 0);
    CHECK_EQ(p.rank(0, 2), 1);
    CHECK(p.better(0, 1, 0));
    CHECK(p.tied(0, 0, 2));
    CHECK_FALSE(p.strict());
    CHECK(OrdinalProfile::from_ranks({{0, 1, 2}}).strict());
    CHECK_THROWS_AS(OrdinalProfile::from_ranks({{0}, {0, 1}}), ValidationError);
}

TEST_CASE("ordinalize ties exact values and canonical_risk represents ranks") {
    const RiskProfile p = RiskProfile::from_rows({{2.0, 2.0, 1.0}, {0.1, 0.3, 0.2}});
    const OrdinalProfile o = ordinalize(p);
    CHECK(o.tied(0, 0, 1));
    CHECK(o.better(0, 2, 0));
    CHECK(o.better(1, 0, 2));

    const RiskProfile c = canonical_risk(o);
    CHECK_EQ(c.at(0, 2), 1.0);
    CHECK_EQ(c.at(0, 0), 2.0);

    detail::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<int>> rows(2, std::vector<int>(4));
        for (auto& row : rows)
            for (int& v : row) v = static_cast<int>(rng.index(3));
        const OrdinalProfile q = OrdinalProfile::from_ranks(rows);
        CHECK(ordinalize(canonical_risk(q)) == q);
    }
}

TEST_CASE("affine transforms need positive scales and apply per environment") {
    CHECK_THROWS_AS(AffineTransform({{0.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(AffineTransform({{0.0, -2.0}}), ValidationError);

    const AffineTransform t({{1.0, 2.0}, {0.0, 0.5}});
    const RiskProfile p = RiskProfile::from_rows({{1.0, 3.0}, {4.0, 2.0}});
    const RiskProfile q = apply_affine(p, t);
    CHECK_EQ(q.at(0, 0), 3.0);
    CHECK_EQ(q.at(0, 1), 7.0);
    CHECK_EQ(q.at(1, 0), 2.0);
    CHECK_THROWS_AS(apply_affine(p, AffineTransform({{0.0, 1.0}})), ValidationError);
}

TEST_CASE("monotone catalogue is strictly increasing") {
    const auto catalogue = MonotoneTransform::catalogue();
    CHECK_EQ(catalogue.size(), 4);
    for (const auto& t : catalogue) {
        double prev = t.apply(-5.0);
        for (double x = -4.5; x <= 5.0; x += 0.5) {
            const double cur = t.apply(x);
            CHECK(cur > prev);
            prev = cur;
        }
    }
    const RiskProfile p = RiskProfile::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const RiskProfile q = apply_monotone(p, 1, MonotoneTransform::exponential());
    CHECK_EQ(q.at(0, 0), 1.0);  // untouched environment
    CHECK_EQ(q.at(1, 0), std::exp(3.0));
}

TEST_CASE("argmin picks all minimizers within the menu") {
    const std::vector<double> risks{3.0, 1.0, 1.0, 2.0};
    CHECK_EQ(argmin_on_menu(risks, Menu{0, 1, 2, 3}), Menu{1, 2});
    CHECK_EQ(argmin_on_menu(risks, Menu{0, 3}), Menu{3});
}

TEST_CASE("rng streams are deterministic and well ranged") {
    detail::Rng a(123), b(123), c(124);
    bool same = true, diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        same = same && x == b.next_u64();
        diff = diff || x != c.next_u64();
    }
    CHECK(same);
    CHECK(diff);
    CHECK(detail::Rng::mix(1, 0) != detail::Rng::mix(1, 1));

    detail::Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.index(13) < 13);
    }
    const auto perm = r.permutation(6);
    std::set<int> seen(perm.begin(), perm.end());
    CHECK_EQ(perm.size(), 6);
    CHECK_EQ(seen.size(), 6);
    CHECK_EQ(*seen.begin(), 0);
}

TEST_CASE("strict rank vectors cover every permutation once") {
    const auto& rvs = detail::strict_rank_vectors(3);
    CHECK_EQ(rvs.size(), 6);
    std::set<std::vector<int>> distinct(rvs.begin(), rvs.end());
    CHECK_EQ(distinct.size(), 6);
    for (const auto& rv : rvs) {
        std::vector<int> sorted = rv;
        std::sort(sorted.begin(), sorted.end());
        CHECK_EQ(sorted, std::vector<int>{0, 1, 2});
    }
    CHECK_EQ(detail::factorial(5), 120);
}

TEST_CASE("enumeration guard rejects oversized domains") {
    CHECK_NOTHROW(detail::check_enumeration_guard(3, 3, 10'000'000, "test"));
    CHECK_THROWS_AS(detail::check_enumeration_guard(3, 20, 10'000'000, "test"), GuardError);
    CHECK_THROWS_AS(detail::check_enumeration_guard(10, 10, 10'000'000, "test"), GuardError);
}

}  // TEST_SUITE
