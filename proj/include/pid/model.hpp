#pragma once

// Profiles, prefixes and their geometry.
//
// A profile is a set of agents, each holding a strict ranking (a permutation)
// of a common item universe.  A prefix restricts each list to its first
// cuts[x] entries; all structural notions below (slots, boundary, shape,
// tail) are defined on prefixes.  The full profile is the prefix cut at m.

#include <string>
#include <vector>

#include "pid/core.hpp"

namespace pid {

struct Profile {
    std::vector<std::string> agents; // labels, parallel to lists
    ItemSet items;                   // sorted universe
    std::vector<std::vector<Item>> lists;

    int n() const { return static_cast<int>(agents.size()); }
    int m() const { return static_cast<int>(items.size()); }

    bool operator==(const Profile&) const = default;
};

// Throws on structural defects: lists that are not permutations of the
// universe, duplicate ids, agent/list count mismatch.
inline void validate(const Profile& p)
{
    if (p.agents.empty())
        raise(Errc::empty_profile, "profile has no agents");
    if (p.agents.size() != p.lists.size())
        raise(Errc::wrong_agent_count, "agent labels and lists differ in count");
    for (std::size_t a = 0; a < p.lists.size(); ++a) {
        const auto& list = p.lists[a];
        ItemSet seen;
        seen.reserve(list.size());
        for (Item x : list) {
            if (!set_contains(p.items, x))
                raise(Errc::unknown_item, "list of " + p.agents[a] + " ranks an item outside the universe", p.agents[a], x);
            auto pos = std::lower_bound(seen.begin(), seen.end(), x);
            if (pos != seen.end() && *pos == x)
                raise(Errc::duplicate_item_in_list, "list of " + p.agents[a] + " repeats an item", p.agents[a], x);
            seen.insert(pos, x);
        }
        if (seen.size() != p.items.size()) {
            ItemSet missing = set_minus(p.items, seen);
            raise(Errc::missing_item, "list of " + p.agents[a] + " omits an item", p.agents[a], missing.front());
        }
    }
}

// Builds a profile from raw lists.  The universe is the union of all ranked
// items; labels default to a1..aN.  The result is validated.
inline Profile make_profile(std::vector<std::vector<Item>> lists,
                            std::vector<std::string> agents = {})
{
    if (lists.empty())
        raise(Errc::empty_profile, "no preference lists given");
    Profile p;
    p.lists = std::move(lists);
    if (agents.empty()) {
        for (std::size_t a = 0; a < p.lists.size(); ++a)
            p.agents.push_back("a" + std::to_string(a + 1));
    } else {
        p.agents = std::move(agents);
    }
    ItemSet all;
    for (const auto& list : p.lists)
        for (Item x : list)
            set_insert(all, x);
    p.items = std::move(all);
    validate(p);
    return p;
}

// Removes `deleted` from the universe and from every list; surviving items
// keep their ids and relative order.
inline Profile delete_items(const Profile& p, const ItemSet& deleted)
{
    for (Item x : deleted)
        if (!set_contains(p.items, x))
            raise(Errc::unknown_item, "cannot delete an item outside the universe", {}, x);
    Profile out;
    out.agents = p.agents;
    out.items = set_minus(p.items, deleted);
    out.lists.reserve(p.lists.size());
    for (const auto& list : p.lists) {
        std::vector<Item> kept;
        kept.reserve(list.size() - deleted.size());
        for (Item x : list)
            if (!set_contains(deleted, x))
                kept.push_back(x);
        out.lists.push_back(std::move(kept));
    }
    return out;
}

// -- prefixes ------------------------------------------------------------

struct Slot {
    int agent; // index into Profile::agents
    int index; // 1-based round

    friend bool operator==(Slot a, Slot b) { return a.agent == b.agent && a.index == b.index; }
    friend bool operator<(Slot a, Slot b)
    {
        return a.agent != b.agent ? a.agent < b.agent : a.index < b.index;
    }
};

struct Prefix {
    Profile profile;
    std::vector<int> cuts; // cuts[x] in [0, m]

    int n() const { return profile.n(); }

    bool operator==(const Prefix&) const = default;
};

inline Prefix make_prefix(Profile profile, std::vector<int> cuts)
{
    if (cuts.size() != profile.lists.size())
        raise(Errc::wrong_agent_count, "one cut per agent required");
    for (std::size_t a = 0; a < cuts.size(); ++a)
        if (cuts[a] < 0 || cuts[a] > profile.m())
            raise(Errc::item_outside_prefix, "cut for " + profile.agents[a] + " out of range", profile.agents[a]);
    return Prefix{std::move(profile), std::move(cuts)};
}

inline Prefix full_prefix(Profile profile)
{
    std::vector<int> cuts(profile.lists.size(), profile.m());
    return Prefix{std::move(profile), std::move(cuts)};
}

// Slot (x, i) draws from the first n*(i-1)+1 entries of x's list.
inline int window_size(int index, int n_agents)
{
    return n_agents * (index - 1) + 1;
}

// Number of slots a cut supports: one per started round, where round i
// starts as soon as the cut reaches n*(i-2)+2.  Closed form below.
inline int slot_count(int cut, int n_agents)
{
    if (cut <= 0)
        return 0;
    return (cut + 2 * n_agents - 2) / n_agents;
}

// Rounds whose whole window lies inside the cut.
inline int complete_slot_count(int cut, int n_agents)
{
    if (cut <= 0)
        return 0;
    return (cut - 1) / n_agents + 1;
}

inline ItemSet items_of(const Prefix& q)
{
    ItemSet out;
    for (std::size_t a = 0; a < q.profile.lists.size(); ++a)
        for (int i = 0; i < q.cuts[a]; ++i)
            set_insert(out, q.profile.lists[a][i]);
    return out;
}

inline std::vector<Slot> slots_of(const Prefix& q)
{
    std::vector<Slot> out;
    for (int a = 0; a < q.n(); ++a)
        for (int i = 1; i <= slot_count(q.cuts[a], q.n()); ++i)
            out.push_back(Slot{a, i});
    return out;
}

inline std::vector<Slot> complete_slots(const Prefix& q)
{
    std::vector<Slot> out;
    for (int a = 0; a < q.n(); ++a)
        for (int i = 1; i <= complete_slot_count(q.cuts[a], q.n()); ++i)
            out.push_back(Slot{a, i});
    return out;
}

// Eligible items of a slot within the prefix, in the agent's list order:
// the slot's window restricted to items appearing in the prefix.  A slot
// whose window lies inside its agent's cut keeps the whole window; only
// an agent's last slot can lose entries.
inline std::vector<Item> slot_window(const Prefix& q, Slot s)
{
    ItemSet present = items_of(q);
    const auto& list = q.profile.lists[s.agent];
    int len = std::min(window_size(s.index, q.n()), static_cast<int>(list.size()));
    std::vector<Item> out;
    for (int i = 0; i < len; ++i)
        if (set_contains(present, list[i]))
            out.push_back(list[i]);
    return out;
}

// Prefix order: inner lies within outer iff every cut does.
inline bool contains(const Prefix& outer, const Prefix& inner)
{
    if (outer.cuts.size() != inner.cuts.size())
        raise(Errc::wrong_agent_count, "prefixes over different agent sets");
    for (std::size_t a = 0; a < outer.cuts.size(); ++a)
        if (inner.cuts[a] > outer.cuts[a])
            return false;
    return true;
}

inline Prefix intersect(const Prefix& p, const Prefix& q)
{
    if (p.cuts.size() != q.cuts.size())
        raise(Errc::wrong_agent_count, "prefixes over different agent sets");
    std::vector<int> cuts(p.cuts.size());
    for (std::size_t a = 0; a < cuts.size(); ++a)
        cuts[a] = std::min(p.cuts[a], q.cuts[a]);
    return Prefix{p.profile, std::move(cuts)};
}

// True when neither prefix contains the other.
inline bool intersecting(const Prefix& p, const Prefix& q)
{
    return !contains(p, q) && !contains(q, p);
}

// Deletes items from the underlying profile and shifts every cut left by
// the number of deletions inside it.  The prefix keeps its content: the
// surviving entries before each new cut are exactly the old ones minus
// `deleted`.
inline Prefix prefix_delete(const Prefix& q, const ItemSet& deleted)
{
    Profile reduced = delete_items(q.profile, deleted);
    std::vector<int> cuts(q.cuts.size());
    for (std::size_t a = 0; a < q.cuts.size(); ++a) {
        int inside = 0;
        for (int i = 0; i < q.cuts[a]; ++i)
            if (set_contains(deleted, q.profile.lists[a][i]))
                ++inside;
        cuts[a] = q.cuts[a] - inside;
    }
    return Prefix{std::move(reduced), std::move(cuts)};
}

// Items of the prefix missing from at least one cut list: ranked by some
// but not all agents within their cuts.
inline ItemSet boundary(const Prefix& q)
{
    ItemSet once_or_more = items_of(q);
    ItemSet out;
    for (Item x : once_or_more) {
        int hits = 0;
        for (std::size_t a = 0; a < q.profile.lists.size(); ++a)
            for (int i = 0; i < q.cuts[a]; ++i)
                if (q.profile.lists[a][i] == x) {
                    ++hits;
                    break;
                }
        if (hits < q.n())
            out.push_back(x);
    }
    return out;
}

enum class ShapeTag { straight, slant, irregular };

struct Shape {
    ShapeTag tag;
    int lagging_agent; // slant only; -1 otherwise
};

// Straight: all cuts equal.  Slant: one agent trails the common cut by
// exactly n.  Everything else is irregular.
inline Shape shape(const Prefix& q)
{
    int hi = *std::max_element(q.cuts.begin(), q.cuts.end());
    int lagging = -1;
    for (std::size_t a = 0; a < q.cuts.size(); ++a) {
        if (q.cuts[a] == hi)
            continue;
        if (q.cuts[a] == hi - q.n() && lagging < 0)
            lagging = static_cast<int>(a);
        else
            return Shape{ShapeTag::irregular, -1};
    }
    if (lagging < 0)
        return Shape{ShapeTag::straight, -1};
    return Shape{ShapeTag::slant, lagging};
}

// Tail of a regular prefix: the last n entries of every cut list when
// straight, the last 2n entries of each leading list when slant (the
// lagging list contributes nothing), clamped to the cut.
inline ItemSet tail(const Prefix& q)
{
    Shape sh = shape(q);
    if (sh.tag == ShapeTag::irregular)
        raise(Errc::irregular_shape, "tail is defined for straight and slant prefixes only");
    ItemSet out;
    for (int a = 0; a < q.n(); ++a) {
        if (sh.tag == ShapeTag::slant && a == sh.lagging_agent)
            continue;
        int take = std::min(q.cuts[a], sh.tag == ShapeTag::straight ? q.n() : 2 * q.n());
        for (int i = q.cuts[a] - take; i < q.cuts[a]; ++i)
            set_insert(out, q.profile.lists[a][i]);
    }
    return out;
}

} // namespace pid
