#pragma once

// Slot eligibility graphs, solvability, proportional allocations and
// minimal obstruction certificates.
//
// A prefix is solvable when some injection assigns to every complete slot
// (x, i) an item from the first n*(i-1)+1 entries of x's list.  For a full
// profile with |I| divisible by |N| such an injection is a bijection and
// yields a proportional allocation; conversely every proportional
// allocation induces one.  When no injection exists, the first slot the
// augmenting search cannot cover spans, together with everything it can
// reach by alternating paths, a prefix that is unsolvable while all its
// strict sub-prefixes are solvable.  That prefix is the certificate.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pid/model.hpp"

namespace pid {

namespace detail {

// Profile with items renumbered to 0..m-1 so per-item state fits in flat
// arrays.  Solver hot paths run on this view and translate back at the end.
struct DenseProfile {
    int n = 0;
    int m = 0;
    ItemSet ids;                         // dense index -> item id, ascending
    std::vector<std::vector<int>> lists; // rankings over dense indices

    int index_of(Item id) const
    {
        return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    }
};

inline DenseProfile densify(const Profile& p)
{
    DenseProfile d;
    d.n = p.n();
    d.m = p.m();
    d.ids = p.items;
    d.lists.resize(d.n);
    for (int x = 0; x < d.n; ++x) {
        d.lists[x].reserve(p.lists[x].size());
        for (Item id : p.lists[x])
            d.lists[x].push_back(d.index_of(id));
    }
    return d;
}

struct MatchOutcome {
    bool solvable = false;
    std::vector<int> owner;       // dense item -> covering agent, -1 free
    std::vector<int> owner_round; // round of the slot an item is assigned to
    // Failure only: per agent the highest round among slots reachable by
    // alternating paths from the uncovered slot, and the reached items.
    std::vector<int> top_round;
    std::vector<char> reached;
};

struct Kuhn {
    int n;
    const std::vector<std::vector<int>>& surv;
    std::vector<int>& owner;
    std::vector<int>& owner_round;
    std::vector<char>& seen;

    bool aug(int x, int j)
    {
        const std::vector<int>& list = surv[x];
        int len = n * (j - 1) + 1;
        for (int p = 0; p < len; ++p) {
            int it = list[p];
            if (seen[it])
                continue;
            seen[it] = 1;
            if (owner[it] < 0 || aug(owner[it], owner_round[it])) {
                owner[it] = x;
                owner_round[it] = j;
                return true;
            }
        }
        return false;
    }
};

// Covers every complete slot of the prefix given by `cuts` (the full lists
// when null) after erasing the items flagged in `deleted` (nothing when
// null).  Cuts count positions of the original lists; window arithmetic
// runs over the surviving entries.  Slots are processed round by round,
// agents in declaration order, windows in list order, so the outcome is
// deterministic.  On the first uncoverable slot the alternating reachable
// set is reported and induces the obstruction certificate.
inline MatchOutcome run_matching(const DenseProfile& d,
                                 const std::vector<char>* deleted,
                                 const std::vector<int>* cuts)
{
    std::vector<std::vector<int>> surv(d.n);
    for (int x = 0; x < d.n; ++x) {
        int cut = cuts ? (*cuts)[x] : static_cast<int>(d.lists[x].size());
        surv[x].reserve(cut);
        for (int p = 0; p < cut; ++p) {
            int it = d.lists[x][p];
            if (!deleted || !(*deleted)[it])
                surv[x].push_back(it);
        }
    }

    MatchOutcome out;
    out.owner.assign(d.m, -1);
    out.owner_round.assign(d.m, 0);

    std::vector<int> rounds(d.n, 0);
    int max_round = 0;
    for (int x = 0; x < d.n; ++x) {
        rounds[x] = complete_slot_count(static_cast<int>(surv[x].size()), d.n);
        max_round = std::max(max_round, rounds[x]);
    }

    std::vector<char> seen(d.m, 0);
    Kuhn kuhn{d.n, surv, out.owner, out.owner_round, seen};
    for (int j = 1; j <= max_round; ++j) {
        for (int x = 0; x < d.n; ++x) {
            if (rounds[x] < j)
                continue;
            std::fill(seen.begin(), seen.end(), 0);
            if (kuhn.aug(x, j))
                continue;
            out.top_round.assign(d.n, 0);
            out.top_round[x] = j;
            for (int it = 0; it < d.m; ++it)
                if (seen[it]) {
                    // A reached item is always matched, or the search
                    // would have augmented through it.
                    int y = out.owner[it];
                    out.top_round[y] = std::max(out.top_round[y], out.owner_round[it]);
                }
            out.reached = std::move(seen);
            return out;
        }
    }
    out.solvable = true;
    return out;
}

// Cut of agent y in the reported obstruction: the window of its highest
// reachable slot, or 0 when no slot of y is reachable.  Positions refer to
// the surviving lists run_matching worked on.
inline std::vector<int> certificate_cuts(const MatchOutcome& out, int n)
{
    std::vector<int> cuts(out.top_round.size(), 0);
    for (std::size_t y = 0; y < out.top_round.size(); ++y)
        if (out.top_round[y] > 0)
            cuts[y] = n * (out.top_round[y] - 1) + 1;
    return cuts;
}

} // namespace detail

// -- allocations -----------------------------------------------------------

struct Allocation {
    std::map<Item, int> owner; // item -> agent index

    bool operator==(const Allocation&) const = default;
};

inline ItemSet bundle(const Allocation& a, int agent)
{
    ItemSet out;
    for (const auto& [item, who] : a.owner)
        if (who == agent)
            out.push_back(item); // map order keeps this sorted
    return out;
}

// Checks proportionality positionally: among every agent's top i entries,
// at least ceil(i/n) must belong to that agent.  Returns false (never
// throws) when the assignment is not a partition of the items.
inline bool verify_allocation(const Profile& p, const Allocation& alloc)
{
    int n = p.n();
    if (static_cast<int>(alloc.owner.size()) != p.m())
        return false;
    for (const auto& [item, who] : alloc.owner)
        if (!set_contains(p.items, item) || who < 0 || who >= n)
            return false;
    for (int x = 0; x < n; ++x) {
        int own = 0;
        for (int i = 1; i <= p.m(); ++i) {
            if (alloc.owner.at(p.lists[x][i - 1]) == x)
                ++own;
            if (own < (i + n - 1) / n)
                return false;
        }
    }
    return true;
}

// -- eligibility graph -------------------------------------------------

struct EligibilityGraph {
    std::vector<Slot> slots;        // agent ascending, round ascending
    ItemSet items;
    std::vector<ItemSet> adjacency; // per slot, ascending item ids
};

inline EligibilityGraph build_graph(const Prefix& q)
{
    EligibilityGraph g;
    g.slots = slots_of(q);
    g.items = items_of(q);
    g.adjacency.reserve(g.slots.size());
    for (Slot s : g.slots)
        g.adjacency.push_back(normalized(slot_window(q, s)));
    return g;
}

inline EligibilityGraph build_graph(const Profile& p)
{
    return build_graph(full_prefix(p));
}

// Maximum slot-item matching, augmenting in slot order with adjacency
// lists as stored.  Matched pairs come back in slot order.
inline std::vector<std::pair<Slot, Item>> max_matching(const EligibilityGraph& g)
{
    int m = static_cast<int>(g.items.size());
    int k = static_cast<int>(g.slots.size());
    std::vector<int> owner(m, -1); // item index -> slot index
    std::vector<char> seen(m, 0);
    auto item_index = [&](Item id) {
        return static_cast<int>(std::lower_bound(g.items.begin(), g.items.end(), id) - g.items.begin());
    };
    std::function<bool(int)> aug = [&](int si) {
        for (Item id : g.adjacency[si]) {
            int it = item_index(id);
            if (seen[it])
                continue;
            seen[it] = 1;
            if (owner[it] < 0 || aug(owner[it])) {
                owner[it] = si;
                return true;
            }
        }
        return false;
    };
    for (int si = 0; si < k; ++si) {
        std::fill(seen.begin(), seen.end(), 0);
        aug(si);
    }
    std::vector<int> matched(k, -1);
    for (int it = 0; it < m; ++it)
        if (owner[it] >= 0)
            matched[owner[it]] = it;
    std::vector<std::pair<Slot, Item>> out;
    for (int si = 0; si < k; ++si)
        if (matched[si] >= 0)
            out.emplace_back(g.slots[si], g.items[matched[si]]);
    return out;
}

// -- solvability and certificates ----------------------------------------

inline bool is_solvable(const Prefix& q)
{
    detail::DenseProfile d = detail::densify(q.profile);
    return detail::run_matching(d, nullptr, &q.cuts).solvable;
}

inline bool is_solvable(const Profile& p)
{
    detail::DenseProfile d = detail::densify(p);
    return detail::run_matching(d, nullptr, nullptr).solvable;
}

struct ObstructionCertificate {
    Prefix prefix;                     // unsolvable, all strict sub-prefixes solvable
    std::vector<Slot> violating_slots; // its slots; all complete
    ItemSet witness_items;             // union of their windows, one fewer than slots
};

namespace detail {

inline Allocation allocation_from(const DenseProfile& d, const MatchOutcome& out)
{
    Allocation a;
    for (int it = 0; it < d.m; ++it)
        if (out.owner[it] >= 0)
            a.owner[d.ids[it]] = out.owner[it];
    return a;
}

inline ObstructionCertificate certificate_from(const Profile& p, const DenseProfile& d,
                                               const MatchOutcome& out)
{
    ObstructionCertificate cert;
    cert.prefix = make_prefix(p, certificate_cuts(out, d.n));
    cert.violating_slots = slots_of(cert.prefix);
    for (int it = 0; it < d.m; ++it)
        if (out.reached[it])
            cert.witness_items.push_back(d.ids[it]);
    return cert;
}

} // namespace detail

// A proportional allocation exists iff |I| is a multiple of |N| and the
// full prefix is solvable; the cover is then a bijection.
inline std::optional<Allocation> find_proportional_allocation(const Profile& p)
{
    detail::DenseProfile d = detail::densify(p);
    detail::MatchOutcome out = detail::run_matching(d, nullptr, nullptr);
    if (!out.solvable)
        return std::nullopt;
    return detail::allocation_from(d, out);
}

// Either a proportional allocation or a minimal obstruction: an unsolvable
// prefix all of whose strict sub-prefixes are solvable, with the slots and
// the witness items that pin the violation down.
inline std::variant<Allocation, ObstructionCertificate>
find_minimal_obstruction(const Profile& p)
{
    if (p.m() == 0)
        raise(Errc::empty_profile, "profile has no items");
    detail::DenseProfile d = detail::densify(p);
    detail::MatchOutcome out = detail::run_matching(d, nullptr, nullptr);
    if (out.solvable)
        return detail::allocation_from(d, out);
    return detail::certificate_from(p, d, out);
}

inline std::optional<ObstructionCertificate> find_minimal_obstruction(const Prefix& q)
{
    detail::DenseProfile d = detail::densify(q.profile);
    detail::MatchOutcome out = detail::run_matching(d, nullptr, &q.cuts);
    if (out.solvable)
        return std::nullopt;
    return detail::certificate_from(q.profile, d, out);
}

// True when deleting y leaves the prefix solvable.  y must lie inside the
// prefix: items beyond the cuts cannot help and asking about them is
// almost surely a bug on the caller's side.
inline bool is_partial_solution(const Prefix& q, const ItemSet& y)
{
    ItemSet present = items_of(q);
    for (Item it : y)
        if (!set_contains(present, it))
            raise(Errc::item_outside_prefix, "deleted item not in prefix", {}, it);
    return is_solvable(prefix_delete(q, y));
}

// Unsolvable, and lowering any single positive cut by one restores
// solvability.  Solvability is inherited downward, so this single-step
// probe decides minimality over all strictly contained prefixes.
inline bool is_minimal_obstruction(const Prefix& q)
{
    detail::DenseProfile d = detail::densify(q.profile);
    if (detail::run_matching(d, nullptr, &q.cuts).solvable)
        return false;
    std::vector<int> cuts = q.cuts;
    for (std::size_t x = 0; x < cuts.size(); ++x) {
        if (cuts[x] == 0)
            continue;
        cuts[x] -= 1;
        bool ok = detail::run_matching(d, nullptr, &cuts).solvable;
        cuts[x] += 1;
        if (!ok)
            return false;
    }
    return true;
}

} // namespace pid
