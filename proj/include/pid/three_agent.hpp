#pragma once

// The three-agent solver: deficiency patterns, strong equivalence,
// domination-filtered branching sets and the memoized MinDel recursion.
//
// MinDel(T, U) answers: what is a minimum-size solution S for the whole
// profile whose intersection with the items of prefix T is exactly U?  The
// recursion grows T around the minimal obstruction of P-U, branches on the
// ways a solution can touch that obstruction (at most two items), and
// memoizes results keyed by the signature that makes partial solutions
// interchangeable: prefix cuts, |U|, U's trace on the boundary of T, and
// the deficiency pattern of T-U.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pid/matching.hpp"

namespace pid {

// Slot surplus of a prefix, incomplete slots included.  Positive
// deficiency does not imply unsolvability: only complete slots need cover.
inline int deficiency(const Prefix& q)
{
    return static_cast<int>(slots_of(q).size()) - static_cast<int>(items_of(q).size());
}

struct DeficiencyTriple {
    std::vector<int> isize; // cuts of the intersection prefix
    int deficiency = 0;
    ItemSet boundary_items;

    friend auto operator<=>(const DeficiencyTriple&, const DeficiencyTriple&) = default;
};

// Canonical form: sorted, duplicates collapsed.
using DeficiencyPattern = std::vector<DeficiencyTriple>;

// The triples (cuts, deficiency, boundary trace) of the prefix's
// intersection with every straight shape (i,i,i) and slant shape
// (i,i,i-3) permutation, i ≡ 1 (mod 3), i ≤ max(cuts)+3, that genuinely
// intersects the prefix (neither side contains the other, on cuts).
// Larger shapes only repeat triples already emitted, since intersections
// clip componentwise.
inline DeficiencyPattern deficiency_pattern(const Prefix& q)
{
    if (q.n() != 3)
        raise(Errc::wrong_agent_count, "deficiency patterns are defined for three agents");

    // first occurrence position of every item in every list, 1-based
    const int m = q.profile.m();
    std::vector<std::array<int, 3>> occ(m, {0, 0, 0});
    auto index_of = [&](Item id) {
        return static_cast<int>(std::lower_bound(q.profile.items.begin(), q.profile.items.end(), id) -
                                q.profile.items.begin());
    };
    for (int x = 0; x < 3; ++x)
        for (std::size_t i = 0; i < q.profile.lists[x].size(); ++i)
            occ[index_of(q.profile.lists[x][i])][x] = static_cast<int>(i) + 1;

    ItemSet delta = boundary(q);
    int maxcut = *std::max_element(q.cuts.begin(), q.cuts.end());

    DeficiencyPattern out;
    auto consider = [&](const std::vector<int>& shape_cuts) {
        bool shape_holds_q = true, q_holds_shape = true;
        for (int x = 0; x < 3; ++x) {
            if (q.cuts[x] > shape_cuts[x])
                shape_holds_q = false;
            if (shape_cuts[x] > q.cuts[x])
                q_holds_shape = false;
        }
        if (shape_holds_q || q_holds_shape)
            return;
        std::vector<int> cut(3);
        for (int x = 0; x < 3; ++x)
            cut[x] = std::min(shape_cuts[x], q.cuts[x]);
        auto inside = [&](Item id) {
            const auto& o = occ[index_of(id)];
            return (o[0] && o[0] <= cut[0]) || (o[1] && o[1] <= cut[1]) || (o[2] && o[2] <= cut[2]);
        };
        int items = 0;
        for (Item id : q.profile.items)
            if (inside(id))
                ++items;
        int slots = slot_count(cut[0], 3) + slot_count(cut[1], 3) + slot_count(cut[2], 3);
        ItemSet btrace;
        for (Item id : delta)
            if (inside(id))
                btrace.push_back(id);
        out.push_back(DeficiencyTriple{std::move(cut), slots - items, std::move(btrace)});
    };

    for (int i = 1; i <= maxcut + 3; i += 3) {
        consider({i, i, i});
        if (i - 3 >= 1) {
            consider({i - 3, i, i});
            consider({i, i - 3, i});
            consider({i, i, i - 3});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Interchangeability of partial solutions of t: same size, same trace on
// t's boundary, same deficiency pattern after deletion.
inline bool strongly_equivalent(const Prefix& t, const ItemSet& u1, const ItemSet& u2)
{
    if (u1.size() != u2.size())
        return false;
    ItemSet delta = boundary(t);
    if (set_intersect(u1, delta) != set_intersect(u2, delta))
        return false;
    return deficiency_pattern(prefix_delete(t, u1)) == deficiency_pattern(prefix_delete(t, u2));
}

// Swap safety on partial solutions of an obstruction: y' dominates y when
// the sizes match and both trace the same set on boundary-union-tail.  In
// a solution, y can then be swapped for y'.  Mere trace inclusion is not
// enough: an item outside the touch set sits in all three cut lists of
// every incomparable minimal obstruction, so swapping it in removes one
// entry per list there, while the item it replaces may miss those prefixes
// entirely and swapping can create a brand-new obstruction.  Equal traces
// balance the per-list deletion counts on every prefix of interest.
inline bool dominates(const ItemSet& y_prime, const ItemSet& y, const Prefix& obstruction)
{
    if (y_prime.size() != y.size())
        return false;
    ItemSet d = set_union(boundary(obstruction), tail(obstruction));
    return set_intersect(y_prime, d) == set_intersect(y, d);
}

using BranchingCandidate = ItemSet;

// All partial solutions of the obstruction with one or two items, disjoint
// from `forbidden`, thinned to one representative per domination class
// (size plus trace on boundary-union-tail).  Any solution touching the
// obstruction in a dropped candidate also works with the kept classmate
// swapped in, so completeness survives the thinning.  Degenerate
// obstructions without a tail (irregular shape) skip the filter.
inline std::vector<BranchingCandidate> branching_set(const Profile& profile_after_u,
                                                     const Prefix& obstruction,
                                                     const ItemSet& forbidden)
{
    if (!(obstruction.profile == profile_after_u))
        raise(Errc::assumption_violated, "the obstruction must live in the deleted profile");

    ItemSet pool = items_of(obstruction);
    std::vector<BranchingCandidate> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (set_contains(forbidden, pool[i]))
            continue;
        ItemSet y{pool[i]};
        if (is_partial_solution(obstruction, y))
            candidates.push_back(std::move(y));
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (set_contains(forbidden, pool[i]))
            continue;
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (set_contains(forbidden, pool[j]))
                continue;
            ItemSet y{pool[i], pool[j]};
            if (is_partial_solution(obstruction, y))
                candidates.push_back(std::move(y));
        }
    }

    if (shape(obstruction).tag == ShapeTag::irregular)
        return candidates;

    ItemSet d = set_union(boundary(obstruction), tail(obstruction));
    std::vector<BranchingCandidate> out;
    std::vector<std::pair<std::size_t, ItemSet>> seen;
    for (const auto& y : candidates) {
        std::pair<std::size_t, ItemSet> key{y.size(), set_intersect(y, d)};
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            continue;
        seen.push_back(std::move(key));
        out.push_back(y);
    }

    // loose pigeonhole ceiling from the touch set actually in play
    std::size_t ds = d.size();
    std::size_t ceiling = (1 + ds) + (1 + ds + ds * (ds - 1) / 2);
    if (out.size() > ceiling)
        raise(Errc::assumption_violated, "branching set exceeds its pigeonhole ceiling");
    return out;
}

// Minimal preimage of a prefix of delete_items(original, u): each lifted
// cut is the position, in the original list, of the q_x-th surviving item.
inline Prefix lift_prefix(const Profile& original, const ItemSet& u, const Prefix& q)
{
    std::vector<int> cuts(original.lists.size(), 0);
    for (std::size_t x = 0; x < original.lists.size(); ++x) {
        int want = q.cuts[x];
        if (want == 0)
            continue;
        int seen = 0;
        for (std::size_t i = 0; i < original.lists[x].size(); ++i) {
            if (!set_contains(u, original.lists[x][i]) && ++seen == want) {
                cuts[x] = static_cast<int>(i) + 1;
                break;
            }
        }
    }
    return Prefix{original, std::move(cuts)};
}

// -- MinDel ----------------------------------------------------------------

struct MemoEntry {
    std::vector<int> prefix_size; // cuts of T
    int u_size = 0;
    ItemSet u_boundary;           // U ∩ boundary(T)
    DeficiencyPattern pattern;    // of T−U
    std::optional<ItemSet> result; // extension W, or Reject when empty
};

struct MemoTable {
    std::map<std::vector<int>, std::vector<MemoEntry>> entries;

    long long size() const
    {
        long long total = 0;
        for (const auto& [cuts, bucket] : entries)
            total += static_cast<long long>(bucket.size());
        return total;
    }
};

struct SolveStats {
    long long memo_entries = 0;
    long long recursions = 0;
    long long obstructions = 0;
};

struct SolveOptions {
    bool memoize = true;
    bool reverse_candidates = false; // differential testing of the branch order
    std::function<void(const ObstructionCertificate&)> on_obstruction;
};

namespace detail {

struct MinDelContext {
    const Profile& p;
    MemoTable& table;
    const SolveOptions& opts;
    SolveStats& stats;
};

// Returns the deleted set of a minimum solution S with S ∩ items_of(T) = U,
// or nothing (Reject) when no solution intersects T that way.
inline std::optional<ItemSet> min_del_rec(MinDelContext& ctx, const std::vector<int>& tcuts,
                                          const ItemSet& u)
{
    ++ctx.stats.recursions;
    Prefix t{ctx.p, tcuts};
    Prefix tu = prefix_delete(t, u); // T−U, and tu.profile is P−U

    // Entry guard: a solution S with S∩I(T)=U leaves T−U intact and
    // solvable, so an unsolvable T−U has no extension.  Not memoized:
    // signatures are only comparable between partial solutions.
    if (!is_solvable(tu))
        return std::nullopt;

    ItemSet u_bound = set_intersect(u, boundary(t));
    DeficiencyPattern pattern = deficiency_pattern(tu);

    if (ctx.opts.memoize) {
        auto bucket = ctx.table.entries.find(tcuts);
        if (bucket != ctx.table.entries.end())
            for (const MemoEntry& e : bucket->second)
                if (e.u_size == static_cast<int>(u.size()) && e.u_boundary == u_bound &&
                    e.pattern == pattern) {
                    if (!e.result)
                        return std::nullopt;
                    return set_union(u, *e.result);
                }
    }
    auto store = [&](std::optional<ItemSet> extension) {
        if (!ctx.opts.memoize)
            return;
        ctx.table.entries[tcuts].push_back(
            MemoEntry{tcuts, static_cast<int>(u.size()), u_bound, pattern, std::move(extension)});
        ++ctx.stats.memo_entries;
    };

    const Profile& pu = tu.profile;
    if (pu.m() == 0) {
        store(ItemSet{});
        return u;
    }
    auto outcome = find_minimal_obstruction(pu);
    if (std::holds_alternative<Allocation>(outcome)) {
        store(ItemSet{});
        return u;
    }
    const auto& cert = std::get<ObstructionCertificate>(outcome);
    ++ctx.stats.obstructions;
    if (ctx.opts.on_obstruction)
        ctx.opts.on_obstruction(cert);

    // Grow T to cover the obstruction.  The componentwise max keeps the
    // old prefix inside the new one, so U stays the exact trace of any
    // solution returned from below.
    Prefix lifted = lift_prefix(ctx.p, u, cert.prefix);
    std::vector<int> tnext(tcuts.size());
    for (std::size_t x = 0; x < tcuts.size(); ++x)
        tnext[x] = std::max(tcuts[x], lifted.cuts[x]);

    ItemSet forbidden = set_minus(items_of(t), u);
    std::vector<BranchingCandidate> branches = branching_set(pu, cert.prefix, forbidden);
    if (branches.empty()) {
        store(std::nullopt);
        return std::nullopt;
    }
    if (ctx.opts.reverse_candidates)
        std::reverse(branches.begin(), branches.end());

    std::optional<ItemSet> best;
    for (const BranchingCandidate& y : branches) {
        auto sub = min_del_rec(ctx, tnext, set_union(u, y));
        if (sub && (!best || sub->size() < best->size()))
            best = std::move(sub);
    }
    if (best)
        store(set_minus(*best, u));
    else
        store(std::nullopt);
    return best;
}

inline Solution package(const Profile& p, const ItemSet& deleted)
{
    Solution sol;
    sol.deleted = deleted;
    sol.size = static_cast<int>(deleted.size());
    sol.allocation = *find_proportional_allocation(delete_items(p, deleted));
    return sol;
}

} // namespace detail

// One MinDel call against a caller-owned table.  Empty result is Reject.
inline std::optional<Solution> min_del(const Prefix& t, const ItemSet& u, MemoTable& table,
                                       const SolveOptions& opts = {})
{
    if (t.n() != 3)
        raise(Errc::wrong_agent_count, "the MinDel recursion is specific to three agents");
    ItemSet present = items_of(t);
    for (Item x : u)
        if (!set_contains(present, x))
            raise(Errc::item_outside_prefix, "u must lie inside the prefix", {}, x);
    SolveStats stats;
    detail::MinDelContext ctx{t.profile, table, opts, stats};
    auto got = detail::min_del_rec(ctx, t.cuts, u);
    if (!got)
        return std::nullopt;
    return detail::package(t.profile, *got);
}

struct Solve3Result {
    Solution solution;
    std::optional<bool> within_k; // present iff k was supplied
    SolveStats stats;
};

// Minimum deletion for a validated three-agent profile: MinDel from the
// empty prefix.  A solution always exists (deleting everything works), so
// the root never rejects.
inline Solve3Result solve3(const Profile& p, std::optional<int> k = std::nullopt,
                           const SolveOptions& opts = {})
{
    if (p.n() != 3)
        raise(Errc::wrong_agent_count, "solve3 requires exactly three agents");
    MemoTable table;
    SolveStats stats;
    detail::MinDelContext ctx{p, table, opts, stats};
    auto got = detail::min_del_rec(ctx, std::vector<int>(3, 0), ItemSet{});
    if (!got)
        raise(Errc::assumption_violated, "the root MinDel call cannot reject");
    Solve3Result out{detail::package(p, *got), std::nullopt, stats};
    if (k)
        out.within_k = out.solution.size <= *k;
    return out;
}

} // namespace pid
