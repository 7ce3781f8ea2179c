#include <doctest.h>

#include <string>
#include <vector>

#include "choicelab/json_io.hpp"
#include "choicelab/revealed.hpp"
#include "choicelab/verify.hpp"
#include "choicelab/zoo.hpp"

using namespace choicelab;
using verify::CandidateRule;
using verify::PairwiseTable;

namespace {

const Universe kU3 = make_universe(default_labels(3));
const FeasibleFamily kFull3 = enumerate_menus(kU3);

/// Independent consistency oracle: materialize the candidate on every
/// strict profile and run the generic checker. A menu losing all maximal
/// elements surfaces as ValidationError.
bool slow_consistent(const CandidateRule& cand) {
    const auto rule = cand.as_rule();
    const int n = cand.environments();
    const auto& rvs = detail::strict_rank_vectors(3);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<std::vector<int>> rows;
        for (int e = 0; e < n; ++e) rows.push_back(rvs[idx[static_cast<std::size_t>(e)]]);
        const auto p = OrdinalProfile::from_ranks(rows);
        try {
            if (!axioms::check_internal_consistency(materialize(rule, p, kFull3), kFull3).passed)
                return false;
        } catch (const ValidationError&) {
            return false;
        }
        int pos = n - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == rvs.size() - 1) {
            idx[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
    }
    return true;
}

std::string random_code(int environments, detail::Rng& rng) {
    std::string code;
    for (int i = 0; i < (1 << environments); ++i)
        code.push_back(static_cast<char>('0' + rng.index(3)));
    return code;
}

std::vector<std::array<std::string, 3>> survivor_codes(const verify::SurvivorReport& r) {
    std::vector<std::array<std::string, 3>> out;
    for (const auto& s : r.survivors) out.push_back({s.fg, s.fh, s.gh});
    return out;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("direction bits read environments most significant first") {
    CHECK_EQ(verify::direction_bit(4, 1, 3), 1);
    CHECK_EQ(verify::direction_bit(4, 2, 3), 0);
    CHECK_EQ(verify::direction_bit(4, 3, 3), 0);
    CHECK_EQ(verify::direction_bit(1, 3, 3), 1);
    CHECK_EQ(verify::direction_bit(0, 1, 1), 0);
    CHECK_EQ(verify::direction_bit(1, 1, 1), 1);
}

TEST_CASE("profiles map to direction vectors and reject ties") {
    // env1: f > g > h, env2: h > g > f
    const auto p = OrdinalProfile::from_ranks({{0, 1, 2}, {2, 1, 0}});
    CHECK_EQ(verify::profile_direction(p, 0, 1), 0b01);
    CHECK_EQ(verify::profile_direction(p, 1, 0), 0b10);
    CHECK_EQ(verify::profile_direction(p, 0, 2), 0b01);

    const auto tied = OrdinalProfile::from_ranks({{0, 0, 1}});
    CHECK_THROWS_AS(verify::profile_direction(tied, 0, 1), ValidationError);
}

TEST_CASE("table codes are validated and dictators read one environment") {
    CHECK_THROWS_AS(PairwiseTable(2, "001"), ValidationError);
    CHECK_THROWS_AS(PairwiseTable(2, "00x1"), ValidationError);
    CHECK_THROWS_AS(PairwiseTable(0, ""), ValidationError);

    CHECK_EQ(PairwiseTable::dictator(2, 1).code(), "0011");
    CHECK_EQ(PairwiseTable::dictator(2, 2).code(), "0101");
    CHECK_EQ(PairwiseTable::dictator(3, 1).code(), "00001111");
    CHECK_EQ(PairwiseTable::dictator(3, 2).code(), "00110011");
    CHECK_EQ(PairwiseTable::dictator(3, 3).code(), "01010101");

    const PairwiseTable d2 = PairwiseTable::dictator(2, 2);
    CHECK(d2.pareto_consistent());
    CHECK(d2.is_dictator_for(2));
    CHECK_FALSE(d2.is_dictator_for(1));
    CHECK_FALSE(PairwiseTable(2, "1001").pareto_consistent());
    CHECK(PairwiseTable(2, "0221").pareto_consistent());
}

TEST_CASE("table enumeration counts and order") {
    CHECK_EQ(verify::enumerate_pairwise_tables(1).size(), 1);
    CHECK_EQ(verify::enumerate_pairwise_tables(2).size(), 9);
    CHECK_EQ(verify::enumerate_pairwise_tables(3).size(), 729);
    CHECK_EQ(verify::enumerate_pairwise_tables(2, false).size(), 81);

    const auto tables = verify::enumerate_pairwise_tables(2);
    CHECK_EQ(tables.front().code(), "0001");
    CHECK_EQ(tables.back().code(), "0221");
    for (std::size_t i = 1; i < tables.size(); ++i)
        CHECK(tables[i - 1].code() < tables[i].code());

    CHECK_THROWS_AS(verify::enumerate_pairwise_tables(4), GuardError);
    std::uint64_t streamed = 0;
    verify::for_each_pairwise_table(4, true, [&](const PairwiseTable&) { ++streamed; });
    CHECK_EQ(streamed, 4782969);  // 3^14
    CHECK_THROWS_AS(verify::for_each_pairwise_table(5, true, [](const PairwiseTable&) {}),
                    GuardError);
}

TEST_CASE("outcome transitivity matches a brute-force relation check") {
    const auto brute = [](int o_fg, int o_fh, int o_gh) {
        bool r[3][3] = {};
        for (int a = 0; a < 3; ++a) r[a][a] = true;
        const auto put = [&](int a, int b, int o) {
            r[a][b] = o != 1;
            r[b][a] = o != 0;
        };
        put(0, 1, o_fg);
        put(0, 2, o_fh);
        put(1, 2, o_gh);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    if (r[a][b] && r[b][c] && !r[a][c]) return false;
        return true;
    };
    for (int o_fg = 0; o_fg < 3; ++o_fg)
        for (int o_fh = 0; o_fh < 3; ++o_fh)
            for (int o_gh = 0; o_gh < 3; ++o_gh)
                CHECK_EQ(verify::outcomes_transitive(o_fg, o_fh, o_gh),
                         brute(o_fg, o_fh, o_gh));
    CHECK(verify::outcomes_transitive(0, 0, 2));
    CHECK_FALSE(verify::outcomes_transitive(0, 1, 0));  // f > g > h > f cycle
}

TEST_CASE("candidate consistency agrees with the materialized checker") {
    // exhaustive at one environment: all 9^3 table triples, both branches hit
    const auto tables1 = verify::enumerate_pairwise_tables(1, false);
    REQUIRE_EQ(tables1.size(), 9);
    int consistent_seen = 0, inconsistent_seen = 0;
    for (const auto& fg : tables1)
        for (const auto& fh : tables1)
            for (const auto& gh : tables1) {
                const CandidateRule cand{fg, fh, gh};
                const bool fast = cand.internally_consistent();
                CHECK_EQ(fast, slow_consistent(cand));
                (fast ? consistent_seen : inconsistent_seen)++;
            }
    CHECK(consistent_seen > 0);
    CHECK(inconsistent_seen > 0);

    // sampled at two environments; random triples are almost never consistent,
    // so this mostly exercises agreement on the failing branch
    detail::Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        const CandidateRule cand{PairwiseTable(2, random_code(2, rng)),
                                 PairwiseTable(2, random_code(2, rng)),
                                 PairwiseTable(2, random_code(2, rng))};
        CHECK_EQ(cand.internally_consistent(), slow_consistent(cand));
    }
    // and the two dictators plus a near-dictator hit the passing branch
    const auto d1 = PairwiseTable::dictator(2, 1);
    const auto d2 = PairwiseTable::dictator(2, 2);
    for (const CandidateRule& cand :
         {CandidateRule{d1, d1, d1}, CandidateRule{d2, d2, d2}, CandidateRule{d1, d1, d2}}) {
        CHECK_EQ(cand.internally_consistent(), slow_consistent(cand));
    }
}

TEST_CASE("candidate dictators require all three tables to agree") {
    const auto d1 = PairwiseTable::dictator(2, 1);
    const auto d2 = PairwiseTable::dictator(2, 2);
    CHECK_EQ(CandidateRule{d1, d1, d1}.dictator(), 1);
    CHECK_EQ(CandidateRule{d2, d2, d2}.dictator(), 2);
    CHECK_FALSE(CandidateRule{d1, d1, d2}.dictator().has_value());
}

TEST_CASE("assembled rules choose maximal elements or report the collapse") {
    const auto d2 = PairwiseTable::dictator(2, 2);
    const auto rule = CandidateRule{d2, d2, d2}.as_rule();
    CHECK_EQ(rule.name, "pairwise_table");
    CHECK_EQ(rule.domain_kind, DomainKind::ordinal);
    // env2 says h > g > f
    const auto p = OrdinalProfile::from_ranks({{0, 1, 2}, {2, 1, 0}});
    CHECK_EQ(rule.choose(p, Menu{0, 1, 2}), Menu{2});
    CHECK_EQ(rule.choose(p, Menu{0, 1}), Menu{1});

    const auto erm2 = zoo::erm_single(2);
    for (const Menu& m : kFull3) CHECK_EQ(rule.choose(p, m), erm2.choose(p, m));

    // strict cycle f > g > h > f: the triple menu has no maximal element
    const CandidateRule cycle{PairwiseTable(1, "00"), PairwiseTable(1, "11"),
                              PairwiseTable(1, "00")};
    const auto cyc_rule = cycle.as_rule();
    const auto q = OrdinalProfile::from_ranks({{0, 1, 2}});
    CHECK_EQ(cyc_rule.choose(q, Menu{0, 1}), Menu{0});
    CHECK_THROWS_AS(cyc_rule.choose(q, Menu{0, 1, 2}), ValidationError);

    const auto tied = OrdinalProfile::from_ranks({{0, 0, 1}, {0, 1, 2}});
    const auto strict_only = CandidateRule{d2, d2, d2}.as_rule();
    CHECK_THROWS_AS(strict_only.choose(tied, Menu{0, 1}), ValidationError);
}

TEST_CASE("one environment leaves exactly the copying rule") {
    verify::SearchOptions opt;
    opt.environments = 1;
    const auto r = verify::search_survivors(opt);
    CHECK_EQ(r.candidates_total, 1);
    CHECK_EQ(r.survivor_count, 1);
    REQUIRE_EQ(r.survivors.size(), 1);
    CHECK_EQ(r.survivors[0].fg, "01");
    CHECK_EQ(r.survivors[0].fh, "01");
    CHECK_EQ(r.survivors[0].gh, "01");
    CHECK_EQ(r.survivors[0].dictator, 1);
}

TEST_CASE("two environments leave the two copying rules") {
    const auto r = verify::verify_corollary(3, 2);
    CHECK_EQ(r.survivor_count, 2);
    CHECK(r.all_dictatorial);
    const auto codes = survivor_codes(r);
    REQUIRE_EQ(codes.size(), 2);
    CHECK_EQ(codes[0], (std::array<std::string, 3>{"0011", "0011", "0011"}));
    CHECK_EQ(codes[1], (std::array<std::string, 3>{"0101", "0101", "0101"}));
    CHECK_EQ(r.survivors[0].dictator, 1);
    CHECK_EQ(r.survivors[1].dictator, 2);
}

TEST_CASE("three environments leave the three copying rules and nothing else") {
    const auto r = verify::verify_corollary(3, 3);
    CHECK_EQ(r.survivor_count, 3);
    CHECK(r.all_dictatorial);
    CHECK_EQ(r.candidates_total, 729ull * 729ull * 729ull);
    for (int i = 0; i < 3; ++i) {
        const std::string code = PairwiseTable::dictator(3, i + 1).code();
        CHECK_EQ(r.survivors[static_cast<std::size_t>(i)].fg, code);
        CHECK_EQ(r.survivors[static_cast<std::size_t>(i)].dictator, i + 1);
    }

    const auto theorem = verify::verify_theorem(3, 3);
    CHECK_EQ(theorem.survivor_count, 0);
    CHECK(theorem.survivors.empty());
    CHECK(theorem.all_dictatorial);  // vacuous
}

TEST_CASE("adding the no-dictator requirement empties small domains too") {
    CHECK_EQ(verify::verify_theorem(3, 1).survivor_count, 0);
    // not asserted by the library at n = 2; the measured count is zero
    CHECK_EQ(verify::verify_theorem(3, 2).survivor_count, 0);
}

TEST_CASE("pruning changes the node count, never the survivors") {
    verify::SearchOptions pruned;
    pruned.environments = 2;
    verify::SearchOptions unpruned = pruned;
    unpruned.prune = false;

    const auto a = verify::search_survivors(pruned);
    const auto b = verify::search_survivors(unpruned);
    CHECK_EQ(survivor_codes(a), survivor_codes(b));
    CHECK_EQ(a.survivor_count, b.survivor_count);
    CHECK(a.nodes_explored < b.nodes_explored);
    CHECK_EQ(b.nodes_explored, 729);  // 9^3 full triples

    // same agreement when unanimity is dropped (81 tables per pair)
    verify::SearchOptions loose;
    loose.environments = 2;
    loose.axioms.pareto = false;
    loose.allow_missing_pareto = true;
    verify::SearchOptions loose_unpruned = loose;
    loose_unpruned.prune = false;
    const auto c = verify::search_survivors(loose);
    const auto d = verify::search_survivors(loose_unpruned);
    CHECK_EQ(c.survivor_count, d.survivor_count);
    CHECK_EQ(survivor_codes(c), survivor_codes(d));
    CHECK(c.survivor_count > 2);      // anti-dictators and all-ties variants
    CHECK_FALSE(c.all_dictatorial);
}

TEST_CASE("dropping the triple menus dissolves the collapse") {
    verify::SearchOptions opt;
    opt.environments = 2;
    opt.omit_triples = true;
    opt.axioms.ci = true;
    opt.max_listed = 1000;
    const auto r = verify::search_survivors(opt);
    CHECK_EQ(r.survivor_count, 727);  // 9^3 triples minus the two dictators
    CHECK_FALSE(r.all_dictatorial);

    opt.axioms.ci = false;
    CHECK_EQ(verify::search_survivors(opt).survivor_count, 729);
}

TEST_CASE("search guards refuse out-of-range domains") {
    verify::SearchOptions opt;
    opt.alternatives = 4;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.environments = 0;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);
    opt.environments = 4;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.environments = 2;
    opt.axioms.pareto = false;
    CHECK_THROWS_AS(verify::search_survivors(opt), ValidationError);
    opt.allow_missing_pareto = true;
    opt.environments = 3;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.environments = 3;
    opt.omit_triples = true;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.environments = 3;
    opt.axioms.internal_consistency = false;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.environments = 3;
    opt.prune = false;
    CHECK_THROWS_AS(verify::search_survivors(opt), GuardError);

    opt = {};
    opt.crosscheck_samples = -1;
    CHECK_THROWS_AS(verify::search_survivors(opt), ValidationError);
    opt = {};
    opt.max_listed = -1;
    CHECK_THROWS_AS(verify::search_survivors(opt), ValidationError);
}

TEST_CASE("contraction traces shrink to the anchored environment") {
    for (int n = 1; n <= 6; ++n) {
        const auto t = verify::trace_decisiveness(n);
        CHECK(t.basis_validated);
        CHECK(t.self_validated);
        CHECK_EQ(t.terminal, 1);
        CHECK(t.validation_checks > 0);
        std::size_t prev = static_cast<std::size_t>(n);
        for (const auto& step : t.steps) {
            CHECK(step.coalition.size() == prev);
            CHECK(step.winner.size() < prev);
            CHECK(step.winner.size() >= 1);
            CHECK((step.branch == 'A' || step.branch == 'B'));
            CHECK(step.local_check);
            CHECK_EQ(step.spreads.size(), 6);
            for (const auto& s : step.spreads) CHECK(s.local_check);
            prev = step.winner.size();
        }
        if (n == 1) CHECK(t.steps.empty());
        CHECK_EQ(prev, 1);
    }
    CHECK_EQ(verify::trace_decisiveness(3, 2).terminal, 2);
    CHECK_EQ(verify::trace_decisiveness(5, 4).terminal, 4);
    CHECK(verify::trace_decisiveness(4).dictator_cross_checked);
}

TEST_CASE("traces throw on rules outside the assumptions") {
    CHECK_THROWS_AS(verify::trace_decisiveness(zoo::borda(), 3), AssertionError);
    CHECK_THROWS_AS(verify::trace_decisiveness(zoo::weighted_sum({1.0, 1.0}), 2),
                    AssertionError);
    CHECK_THROWS_AS(verify::trace_decisiveness(0), ValidationError);
    CHECK_THROWS_AS(verify::trace_decisiveness(17), GuardError);
}

TEST_CASE("reports serialize validly and deterministically") {
    const auto r = verify::verify_corollary(3, 2);
    const json jr = verify::to_json(r, false);
    CHECK_NOTHROW(io::validate_report(jr));
    CHECK_EQ(jr.at("kind"), "survivor_report");
    CHECK_FALSE(jr.contains("elapsed_ms"));
    CHECK(verify::to_json(r, true).contains("elapsed_ms"));
    CHECK_EQ(jr, verify::to_json(verify::verify_corollary(3, 2), false));

    const auto t = verify::trace_decisiveness(3);
    const json jt = verify::to_json(t, false);
    CHECK_NOTHROW(io::validate_report(jt));
    CHECK_EQ(jt.at("kind"), "decisiveness_trace");
    CHECK_EQ(jt.at("terminal"), json::array({1}));
    CHECK_EQ(jt, verify::to_json(verify::trace_decisiveness(3), false));
}

}  // TEST_SUITE
