#pragma once

// Exact solvers for any number of agents, used as ground truth everywhere.
//
// The search enumerates deletion sets by increasing size and, within a
// size, in lexicographic order of the sorted id sequence; the first
// solvable set wins.  Only sizes s with |I| - s divisible by |N| can work,
// the rest are skipped outright.  The walk over a fixed size is a DFS over
// index combinations that skips a subtree only when no completion below it
// can be solvable, so the returned set is exactly the one plain
// enumeration would find:
//
//  - every obstruction certificate met along the current path keeps
//    obstructing until one of its items is deleted, so a completion must
//    hit each certificate it leaves untouched;
//  - a certificate none of whose items are still eligible prunes the
//    subtree, and pairwise disjoint untouched certificates each consume
//    one pick of the remaining budget.
//
// On structured instances (the reduction families) these skips collapse
// the search to certificate chasing; on small profiles they are inert.

#include <algorithm>
#include <optional>
#include <vector>

#include "pid/matching.hpp"

namespace pid {

struct Solution {
    ItemSet deleted;
    Allocation allocation; // over the surviving items
    int size = 0;

    bool operator==(const Solution&) const = default;
};

namespace detail {

struct OracleSearch {
    const DenseProfile& d;
    int target;
    std::vector<char> deleted;
    std::vector<int> chosen;             // ascending dense indices
    std::vector<std::vector<int>> certs; // one witness per path node
    std::vector<char> used;              // scratch for the disjointness count

    OracleSearch(const DenseProfile& dense, int t)
        : d(dense), target(t), deleted(dense.m, 0), used(dense.m, 0)
    {
    }

    // True when some certificate on the path is untouched by the current
    // set and cannot be hit by picks at index >= start, or when more
    // pairwise disjoint untouched certificates remain than picks.
    bool dead_end(int start, int budget)
    {
        std::fill(used.begin(), used.end(), 0);
        int disjoint = 0;
        for (const auto& cert : certs) {
            bool touched = false;
            for (int it : cert)
                if (deleted[it]) {
                    touched = true;
                    break;
                }
            if (touched)
                continue;
            bool reachable = false;
            for (int it : cert)
                if (it >= start) {
                    reachable = true;
                    break;
                }
            if (!reachable)
                return true;
            bool fresh = true;
            for (int it : cert)
                if (it >= start && used[it]) {
                    fresh = false;
                    break;
                }
            if (fresh) {
                ++disjoint;
                for (int it : cert)
                    if (it >= start)
                        used[it] = 1;
            }
        }
        return disjoint > budget;
    }

    bool rec(int start)
    {
        int budget = target - static_cast<int>(chosen.size());
        if (dead_end(start, budget))
            return false;
        MatchOutcome out = run_matching(d, &deleted, nullptr);
        if (out.solvable)
            return true;
        if (budget == 0)
            return false;

        std::vector<int> witness;
        for (int it = 0; it < d.m; ++it)
            if (out.reached[it])
                witness.push_back(it);
        certs.push_back(std::move(witness));

        for (int x = start; x <= d.m - budget; ++x) {
            deleted[x] = 1;
            chosen.push_back(x);
            if (rec(x + 1))
                return true; // keep chosen as the answer
            chosen.pop_back();
            deleted[x] = 0;
        }
        certs.pop_back();
        return false;
    }

    std::optional<ItemSet> run()
    {
        if (!rec(0))
            return std::nullopt;
        ItemSet out;
        out.reserve(chosen.size());
        for (int x : chosen)
            out.push_back(d.ids[x]);
        return out;
    }
};

} // namespace detail

// Minimum-size solution of size at most k, or none.  Enumeration order is
// size-ascending, then lexicographic on the sorted deleted ids; the first
// hit is returned.
inline std::optional<Solution> solve_bounded(const Profile& p, int k)
{
    if (k < 0)
        return std::nullopt;
    detail::DenseProfile d = detail::densify(p);
    int first = p.m() % p.n();
    for (int s = first; s <= std::min(k, p.m()); s += p.n()) {
        detail::OracleSearch search(d, s);
        if (auto got = search.run()) {
            Solution sol;
            sol.deleted = *got;
            sol.size = static_cast<int>(got->size());
            sol.allocation = *find_proportional_allocation(delete_items(p, *got));
            return sol;
        }
    }
    return std::nullopt;
}

// Unconditional minimum: deleting everything always works, so a solution
// exists for every profile.  Guarded by a size cap since the search is
// exponential in the worst case.
inline Solution solve_exhaustive(const Profile& p, int cap = 20)
{
    if (p.m() > cap)
        raise(Errc::instance_too_large,
              "profile has " + std::to_string(p.m()) + " items, cap is " + std::to_string(cap));
    return *solve_bounded(p, p.m());
}

inline int min_deletion_size(const Profile& p, int cap = 20)
{
    return solve_exhaustive(p, cap).size;
}

} // namespace pid
