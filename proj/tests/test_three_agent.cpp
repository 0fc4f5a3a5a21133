#include <catch2/catch_amalgamated.hpp>

#include "pid/oracle.hpp"
#include "pid/three_agent.hpp"
#include "support/testutil.hpp"

using namespace pid;
using testutil::code_of;
using testutil::demo7;
using testutil::sample_profile;

namespace {

const Profile& P()
{
    static Profile p = demo7();
    return p;
}

Prefix obstruction_of(const Profile& p)
{
    auto got = find_minimal_obstruction(p);
    return std::get<ObstructionCertificate>(got).prefix;
}

} // namespace

TEST_CASE("deficiency counts every slot against the item pool", "[three_agent]")
{
    CHECK(deficiency(make_prefix(P(), {4, 4, 4})) == 1);
    CHECK(deficiency(make_prefix(P(), {0, 0, 0})) == 0);
    CHECK(deficiency(full_prefix(P())) == 2);

    // 6 slots over items {1,3,4,5}
    Profile q = delete_items(P(), {2});
    CHECK(deficiency(make_prefix(q, {3, 3, 3})) == 2);
}

TEST_CASE("deficiency pattern of the running example", "[three_agent]")
{
    Profile q = delete_items(P(), {2});
    DeficiencyPattern pat = deficiency_pattern(make_prefix(q, {3, 3, 3}));

    DeficiencyPattern want{
        DeficiencyTriple{{1, 3, 3}, 1, {1, 4, 5}},
        DeficiencyTriple{{3, 1, 3}, 1, {1, 4, 5}},
        DeficiencyTriple{{3, 3, 1}, 1, {1, 4, 5}},
    };
    CHECK(pat == want);
}

TEST_CASE("deficiency pattern edge cases", "[three_agent]")
{
    // straight canonical prefixes admit no genuinely intersecting shape
    CHECK(deficiency_pattern(make_prefix(P(), {4, 4, 4})).empty());
    CHECK(deficiency_pattern(make_prefix(P(), {0, 0, 0})).empty());

    Profile two = make_profile({{1, 2}, {2, 1}});
    CHECK(code_of([&] { deficiency_pattern(full_prefix(two)); }) == Errc::wrong_agent_count);
}

TEST_CASE("strong equivalence compares size, boundary trace and pattern", "[three_agent]")
{
    Prefix t = make_prefix(P(), {4, 4, 4});
    CHECK(strongly_equivalent(t, {2}, {2}));
    CHECK_FALSE(strongly_equivalent(t, {2}, {5}));    // traces differ on boundary {1,4,5}
    CHECK_FALSE(strongly_equivalent(t, {2}, {4}));    // likewise
    CHECK_FALSE(strongly_equivalent(t, {2}, {6}));    // equal traces, patterns differ
    CHECK_FALSE(strongly_equivalent(t, {2}, {4, 5})); // sizes differ
}

TEST_CASE("domination compares traces on boundary plus tail", "[three_agent]")
{
    Prefix q = obstruction_of(P()); // (4,4,4), touch set is all of {1..5}
    CHECK(dominates({2}, {2}, q));
    CHECK_FALSE(dominates({2}, {5}, q));
    CHECK_FALSE(dominates({1, 2}, {1, 3}, q));
    CHECK_FALSE(dominates({2}, {2, 4}, q));

    // identical lists: boundary empty, tail {5,6,7}, so items before the
    // tail are interchangeable with each other but not with tail members
    Profile same = make_profile({{1, 2, 3, 4, 5, 6, 7, 8, 9},
                                 {1, 2, 3, 4, 5, 6, 7, 8, 9},
                                 {1, 2, 3, 4, 5, 6, 7, 8, 9}});
    Prefix s = make_prefix(same, {7, 7, 7});
    CHECK(dominates({1}, {2}, s));
    CHECK(dominates({2}, {1}, s));
    CHECK_FALSE(dominates({1}, {5}, s));
    CHECK_FALSE(dominates({5}, {1}, s));
    CHECK(dominates({5}, {5}, s));

    Profile deg = make_profile({{1, 2, 3}, {1, 3, 2}, {2, 3, 1}});
    Prefix irr = obstruction_of(deg); // (1,1,0)
    CHECK(code_of([&] { dominates({1}, {1}, irr); }) == Errc::irregular_shape);
}

TEST_CASE("branching set of the running example", "[three_agent]")
{
    Prefix q = obstruction_of(P());

    std::vector<BranchingCandidate> want{{2}, {4}, {5}, {2, 4}, {2, 5}, {4, 5}};
    CHECK(branching_set(P(), q, {}) == want);

    std::vector<BranchingCandidate> rest{{4}, {5}, {4, 5}};
    CHECK(branching_set(P(), q, {2}) == rest);

    CHECK(branching_set(P(), q, {1, 2, 3, 4, 5}).empty());

    Profile other = delete_items(P(), {2});
    CHECK(code_of([&] { branching_set(other, q, {}); }) == Errc::assumption_violated);
}

TEST_CASE("branching set of a degenerate obstruction", "[three_agent]")
{
    Profile deg = make_profile({{1, 2, 3}, {1, 3, 2}, {2, 3, 1}});
    Prefix q = obstruction_of(deg);
    std::vector<BranchingCandidate> want{{1}};
    CHECK(branching_set(deg, q, {}) == want);
}

TEST_CASE("branching set is a sound antichain on random obstructions", "[three_agent]")
{
    for (int m : {4, 5, 6, 7, 8}) {
        for (int seed = 0; seed < 40; ++seed) {
            Profile p = sample_profile(3, m, 900 + 17 * m + seed);
            if (is_solvable(p))
                continue;
            Prefix q = obstruction_of(p);
            auto retained = branching_set(p, q, {});

            // reference enumeration: every small partial solution
            std::vector<BranchingCandidate> all;
            ItemSet pool = items_of(q);
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (is_partial_solution(q, {pool[i]}))
                    all.push_back({pool[i]});
            }
            for (std::size_t i = 0; i < pool.size(); ++i)
                for (std::size_t j = i + 1; j < pool.size(); ++j)
                    if (is_partial_solution(q, {pool[i], pool[j]}))
                        all.push_back({pool[i], pool[j]});

            if (shape(q).tag == ShapeTag::irregular) {
                CHECK(retained == all);
                continue;
            }
            for (const auto& y : retained) {
                CHECK(std::find(all.begin(), all.end(), y) != all.end());
                for (const auto& r : retained)
                    if (r != y)
                        CHECK_FALSE(dominates(r, y, q));
            }
            for (const auto& c : all) {
                if (std::find(retained.begin(), retained.end(), c) != retained.end())
                    continue;
                bool covered = false;
                for (const auto& r : retained)
                    covered = covered || dominates(r, c, q);
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("lift recovers the minimal preimage prefix", "[three_agent]")
{
    Profile q2 = delete_items(P(), {2});
    Prefix lifted = lift_prefix(P(), {2}, make_prefix(q2, {3, 3, 3}));
    CHECK(lifted.cuts == std::vector<int>{4, 3, 4});

    Prefix same = lift_prefix(P(), {}, make_prefix(P(), {4, 4, 4}));
    CHECK(same.cuts == std::vector<int>{4, 4, 4});

    Profile q7 = delete_items(P(), {7});
    CHECK(lift_prefix(P(), {7}, make_prefix(q7, {3, 3, 3})).cuts == std::vector<int>{3, 3, 3});

    CHECK(lift_prefix(P(), {2}, make_prefix(q2, {0, 0, 0})).cuts == std::vector<int>{0, 0, 0});
}

TEST_CASE("min_del extends a trace to a minimum solution", "[three_agent]")
{
    MemoTable table;
    auto root = min_del(make_prefix(P(), {0, 0, 0}), {}, table);
    REQUIRE(root.has_value());
    CHECK(root->deleted == ItemSet{2});
    CHECK(root->size == 1);
    CHECK(table.size() >= 1);

    MemoTable t2;
    auto keep2 = min_del(full_prefix(P()), {2}, t2);
    REQUIRE(keep2.has_value());
    CHECK(keep2->deleted == ItemSet{2});

    // the deep prefix pins items {1..5}; P-{5} is solvable as it stands
    Prefix deep = make_prefix(P(), {4, 4, 4});
    MemoTable t3;
    auto got = min_del(deep, {5}, t3);
    REQUIRE(got.has_value());
    CHECK(got->deleted == ItemSet{5});
}

TEST_CASE("min_del rejects traces no solution can have", "[three_agent]")
{
    // deleting item 1 strands item 3 at the head of two lists
    MemoTable table;
    CHECK_FALSE(min_del(full_prefix(P()), {1}, table).has_value());

    // P-{4} is unsolvable and the trace caps further deletions at {6,7},
    // too few to reach the next feasible size
    MemoTable t2;
    CHECK_FALSE(min_del(make_prefix(P(), {4, 4, 4}), {4}, t2).has_value());
}

TEST_CASE("min_del input validation", "[three_agent]")
{
    MemoTable table;
    Profile two = make_profile({{1, 2}, {2, 1}});
    CHECK(code_of([&] { min_del(full_prefix(two), {}, table); }) == Errc::wrong_agent_count);
    CHECK(code_of([&] { min_del(make_prefix(P(), {4, 4, 4}), {7}, table); }) ==
          Errc::item_outside_prefix);
}

TEST_CASE("solve3 on the running example", "[three_agent]")
{
    Solve3Result r = solve3(P());
    CHECK(r.solution.deleted == ItemSet{2});
    CHECK(r.solution.size == 1);
    CHECK(verify_allocation(delete_items(P(), {2}), r.solution.allocation));
    CHECK_FALSE(r.within_k.has_value());
    CHECK(r.stats.recursions >= 7);
    CHECK(r.stats.obstructions >= 1);
    CHECK(r.stats.memo_entries >= 1);

    CHECK(solve3(P(), 1).within_k == std::optional<bool>(true));
    CHECK(solve3(P(), 0).within_k == std::optional<bool>(false));

    Profile two = make_profile({{1, 2}, {2, 1}});
    CHECK(code_of([&] { solve3(two); }) == Errc::wrong_agent_count);

    Profile empty = make_profile({{}, {}, {}});
    CHECK(solve3(empty).solution.size == 0);
}

TEST_CASE("solve3 reports each obstruction it branches on", "[three_agent]")
{
    std::vector<ObstructionCertificate> seen;
    SolveOptions opts;
    opts.on_obstruction = [&](const ObstructionCertificate& c) { seen.push_back(c); };
    Solve3Result r = solve3(P(), std::nullopt, opts);
    CHECK(static_cast<long long>(seen.size()) == r.stats.obstructions);
    for (const auto& cert : seen)
        CHECK(is_minimal_obstruction(cert.prefix));
}

TEST_CASE("solve3 agrees with the exhaustive oracle", "[three_agent]")
{
    for (int m : {3, 4, 5, 6, 7}) {
        for (int seed = 0; seed < 30; ++seed) {
            Profile p = sample_profile(3, m, 131 * m + seed);
            int want = solve_exhaustive(p).size;
            Solve3Result r = solve3(p);
            INFO("m=" << m << " seed=" << seed);
            CHECK(r.solution.size == want);
            CHECK(verify_allocation(delete_items(p, r.solution.deleted), r.solution.allocation));
        }
    }
    for (int m : {8, 9}) {
        for (int seed = 0; seed < 10; ++seed) {
            Profile p = sample_profile(3, m, 977 * m + seed);
            CHECK(solve3(p).solution.size == solve_exhaustive(p).size);
        }
    }
}

TEST_CASE("solver options do not change the answer", "[three_agent]")
{
    SolveOptions plain;
    SolveOptions nomemo;
    nomemo.memoize = false;
    SolveOptions reversed;
    reversed.reverse_candidates = true;

    for (int m : {4, 5, 6, 7}) {
        for (int seed = 0; seed < 12; ++seed) {
            Profile p = sample_profile(3, m, 263 * m + seed);
            int want = solve3(p, std::nullopt, plain).solution.size;

            Solve3Result off = solve3(p, std::nullopt, nomemo);
            CHECK(off.solution.size == want);
            CHECK(off.stats.memo_entries == 0);

            CHECK(solve3(p, std::nullopt, reversed).solution.size == want);
        }
    }
}
