#pragma once

// Hardness-instance generators: the dominating-set and antimonotone-WCS
// reductions, brute-force oracles for both source problems, and a seeded
// uniform profile sampler.
//
// Both reductions share a skeleton.  Every agent owns a first-choice item
// f(a); selection agents then rank the remaining flag items, the vertex or
// variable items, and a short flag tail that (for the last k+1 of them)
// ends in a private dummy c_j.  The head segments have hard-coded lengths,
// asserted after construction, so a solution of size k must delete exactly
// k vertex/variable items and nothing else.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pid/model.hpp"

namespace pid {

struct Graph {
    int vertices = 0;                       // vertex ids 1..vertices
    std::vector<std::pair<int, int>> edges; // normalized u < v, unique
};

inline Graph make_graph(int vertices, std::vector<std::pair<int, int>> edges)
{
    if (vertices < 0)
        raise(Errc::assumption_violated, "negative vertex count");
    for (auto& [u, v] : edges) {
        if (u == v)
            raise(Errc::assumption_violated, "self-loop in graph");
        if (u < 1 || v < 1 || u > vertices || v > vertices)
            raise(Errc::assumption_violated, "edge endpoint outside the vertex range");
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        raise(Errc::assumption_violated, "duplicate edge in graph");
    return Graph{vertices, std::move(edges)};
}

// conjuncts[i][j] holds the variable indices of the negative literals in
// the j-th conjunctive group of the i-th top-level conjunct, so the
// formula is AND_i OR_j AND_l (not x).
struct AntimonotoneFormula {
    int variables = 0;
    std::vector<std::vector<std::vector<int>>> conjuncts;
};

inline void validate_formula(const AntimonotoneFormula& phi)
{
    if (phi.variables < 1)
        raise(Errc::assumption_violated, "formula needs at least one variable");
    if (phi.conjuncts.empty())
        raise(Errc::assumption_violated, "formula needs at least one conjunct");
    for (const auto& groups : phi.conjuncts) {
        if (groups.empty())
            raise(Errc::assumption_violated, "conjunct needs at least one group");
        for (const auto& lits : groups) {
            if (lits.empty())
                raise(Errc::assumption_violated, "group needs at least one literal");
            for (int v : lits)
                if (v < 1 || v > phi.variables)
                    raise(Errc::assumption_violated, "literal variable out of range");
        }
    }
}

struct GeneratedInstance {
    Profile profile;
    int k = 0;
};

namespace detail {

// Builds one preference list: the explicit head, then every remaining item
// in ascending id order.
inline ItemSet complete_list(const std::vector<Item>& head, int total)
{
    std::vector<char> used(total + 1, 0);
    for (Item x : head)
        used[x] = 1;
    ItemSet list(head.begin(), head.end());
    for (Item x = 1; x <= total; ++x)
        if (!used[x])
            list.push_back(x);
    return list;
}

// First `want` flag items other than the agent's own; flag ids are 1..a_count.
inline std::vector<Item> flags_without(int self, int want, int a_count)
{
    std::vector<Item> out;
    for (Item f = 1; f <= a_count && static_cast<int>(out.size()) < want; ++f)
        if (f != self)
            out.push_back(f);
    if (static_cast<int>(out.size()) != want)
        raise(Errc::assumption_violated, "flag segment exceeds the available flag items");
    return out;
}

} // namespace detail

// Dominating-set reduction.  Agents: n+1 selection agents, then for each
// vertex v a block of |N[v]|+1 vertex agents.  Items: flags 1..|N|, vertex
// items, one dummy per vertex agent, dummies c_1..c_{k+1} last.
inline GeneratedInstance from_dominating_set(const Graph& g, int k)
{
    Graph checked = make_graph(g.vertices, g.edges);
    const int n = checked.vertices;
    const int m = static_cast<int>(checked.edges.size());
    if (k < 0)
        raise(Errc::assumption_violated, "k must be nonnegative");
    if (n < 1)
        raise(Errc::assumption_violated, "the reduction needs at least one vertex");
    if (k > n)
        raise(Errc::assumption_violated, "k exceeds the vertex count");

    std::vector<std::vector<int>> closed(n + 1); // N[v], ascending
    for (int v = 1; v <= n; ++v)
        closed[v].push_back(v);
    for (auto [u, v] : checked.edges) {
        closed[u].push_back(v);
        closed[v].push_back(u);
    }
    for (int v = 1; v <= n; ++v)
        std::sort(closed[v].begin(), closed[v].end());

    const int a_count = 3 * n + 2 * m + 1;
    if (a_count - n <= k)
        raise(Errc::assumption_violated, "validity condition |N|-n > k fails");
    const int total = 2 * a_count + k;
    const int vertex_item = a_count;          // i_v = vertex_item + v
    const int dummy_base = a_count + n;       // d's follow the vertex items
    const int c_base = 2 * a_count - 1;       // c_j = c_base + j

    std::vector<ItemSet> lists;
    lists.reserve(a_count);

    auto head_check = [&](const std::vector<Item>& head, std::size_t want) {
        if (head.size() != want)
            raise(Errc::assumption_violated, "head segment length mismatch");
    };

    for (int i = 1; i <= n + 1; ++i) {
        int self = i;
        bool second_kind = i > n - k;
        // second-kind heads carry a_count-n+k-1 flags in total so the k
        // deletions pull c_i up to position a_count+1 exactly; at k = 0
        // that shortens the leading run by one
        int lead = a_count - n - (second_kind && k == 0 ? 1 : 0);
        std::vector<Item> head{self};
        auto base = detail::flags_without(self, lead, a_count);
        head.insert(head.end(), base.begin(), base.end());
        for (int v = 1; v <= n; ++v)
            head.push_back(vertex_item + v);
        if (!second_kind) {
            auto wide = detail::flags_without(self, a_count - n + k, a_count);
            head.insert(head.end(), wide.begin() + (a_count - n), wide.end());
            head_check(head, static_cast<std::size_t>(1 + a_count + k));
        } else {
            if (k >= 1) {
                auto wide = detail::flags_without(self, a_count - n + k - 1, a_count);
                head.insert(head.end(), wide.begin() + lead, wide.end());
            }
            head.push_back(c_base + (i - (n - k)));
            head_check(head, static_cast<std::size_t>(1 + lead + n + std::max(k - 1, 0) + 1));
        }
        lists.push_back(detail::complete_list(head, total));
    }

    int vertex_agent = 0; // running index over all vertex agents
    for (int v = 1; v <= n; ++v) {
        const int block = static_cast<int>(closed[v].size()) + 1;
        for (int j = 1; j <= block; ++j) {
            ++vertex_agent;
            int self = n + 1 + vertex_agent;
            std::vector<Item> head{self};
            auto base = detail::flags_without(self, a_count - static_cast<int>(closed[v].size()),
                                              a_count);
            head.insert(head.end(), base.begin(), base.end());
            for (int u : closed[v])
                head.push_back(vertex_item + u);
            head.push_back(dummy_base + vertex_agent);
            head_check(head, static_cast<std::size_t>(1 + a_count + 1));
            lists.push_back(detail::complete_list(head, total));
        }
    }
    if (static_cast<int>(lists.size()) != a_count || dummy_base + vertex_agent != c_base)
        raise(Errc::assumption_violated, "agent or dummy count mismatch");

    GeneratedInstance out{make_profile(std::move(lists)), k};
    validate(out.profile);
    return out;
}

// Antimonotone weighted-satisfiability reduction.  Agents: n+1 selection
// agents, then one verification agent per conjunctive group.  Items:
// flags, variable items, verification items y_{i,j}, dummies c_j last.
inline GeneratedInstance from_wcs3(const AntimonotoneFormula& phi, int k)
{
    validate_formula(phi);
    const int n = phi.variables;
    if (k < 0)
        raise(Errc::assumption_violated, "k must be nonnegative");
    if (k > n)
        raise(Errc::assumption_violated, "k exceeds the variable count");

    int groups_total = 0;
    for (const auto& groups : phi.conjuncts)
        groups_total += static_cast<int>(groups.size());
    const int a_count = n + 1 + groups_total;
    if (a_count - n <= k)
        raise(Errc::assumption_violated, "validity condition |N|-n > k fails");
    for (const auto& groups : phi.conjuncts)
        if (a_count - n <= static_cast<int>(groups.size()))
            raise(Errc::assumption_violated, "validity condition |N|-n > m2 fails");

    const int total = 2 * a_count + k;
    const int var_item = a_count; // w_u = var_item + u
    const int y_base = a_count + n;
    const int c_base = 2 * a_count - 1;

    std::vector<ItemSet> lists;
    lists.reserve(a_count);

    auto head_check = [&](const std::vector<Item>& head, std::size_t want) {
        if (head.size() != want)
            raise(Errc::assumption_violated, "head segment length mismatch");
    };

    for (int i = 1; i <= n + 1; ++i) {
        int self = i;
        bool second_kind = i > n - k;
        // same flag arithmetic as the dominating-set selection block
        int lead = a_count - n - (second_kind && k == 0 ? 1 : 0);
        std::vector<Item> head{self};
        auto base = detail::flags_without(self, lead, a_count);
        head.insert(head.end(), base.begin(), base.end());
        for (int u = 1; u <= n; ++u)
            head.push_back(var_item + u);
        if (!second_kind) {
            auto wide = detail::flags_without(self, a_count - n + k, a_count);
            head.insert(head.end(), wide.begin() + (a_count - n), wide.end());
            head_check(head, static_cast<std::size_t>(1 + a_count + k));
        } else {
            if (k >= 1) {
                auto wide = detail::flags_without(self, a_count - n + k - 1, a_count);
                head.insert(head.end(), wide.begin() + lead, wide.end());
            }
            head.push_back(c_base + (i - (n - k)));
            head_check(head, static_cast<std::size_t>(1 + lead + n + std::max(k - 1, 0) + 1));
        }
        lists.push_back(detail::complete_list(head, total));
    }

    int y_offset = 0; // id offset of y_{i,1} within the y block
    int agent = n + 1;
    for (std::size_t i = 0; i < phi.conjuncts.size(); ++i) {
        const auto& groups = phi.conjuncts[i];
        const int m2 = static_cast<int>(groups.size());
        for (int j = 0; j < m2; ++j) {
            ++agent;
            std::vector<char> occurs(n + 1, 0);
            for (int v : groups[j])
                occurs[v] = 1;
            int c_size = 0;
            for (int u = 1; u <= n; ++u)
                c_size += occurs[u] ? 0 : 1;

            // F-segment sized so that deleting the k variable items of a
            // satisfied group pulls the last verification item up to
            // position |N|+1, the edge of the second slot's window
            int fseg = a_count + k - m2 - c_size;
            if (fseg < 1 || fseg > a_count - 1)
                raise(Errc::assumption_violated,
                      "verification flag segment does not fit; formula too degenerate");
            // every agent of the conjunct must still reach the shared
            // verification items after the head shrinks by at most k
            if (k > c_size + 1)
                raise(Errc::assumption_violated,
                      "k too large for a group covering this many variables");

            std::vector<Item> head{agent};
            auto base = detail::flags_without(agent, fseg, a_count);
            head.insert(head.end(), base.begin(), base.end());
            for (int j2 = 1; j2 <= m2 - 1; ++j2)
                head.push_back(y_base + y_offset + j2);
            for (int u = 1; u <= n; ++u)
                if (!occurs[u])
                    head.push_back(var_item + u);
            head.push_back(y_base + y_offset + m2);
            head_check(head, static_cast<std::size_t>(1 + a_count + k));
            lists.push_back(detail::complete_list(head, total));
        }
        y_offset += m2;
    }
    if (static_cast<int>(lists.size()) != a_count || y_base + y_offset != c_base)
        raise(Errc::assumption_violated, "agent or verification item count mismatch");

    GeneratedInstance out{make_profile(std::move(lists)), k};
    validate(out.profile);
    return out;
}

// Reference decision procedures for the two source problems.

inline bool brute_dominating_set(const Graph& g, int k)
{
    Graph checked = make_graph(g.vertices, g.edges);
    const int n = checked.vertices;
    if (n > 16)
        raise(Errc::instance_too_large, "dominating-set oracle capped at 16 vertices");
    if (k < 0)
        return false;
    if (k >= n)
        return true; // the whole vertex set dominates

    std::vector<unsigned> closed(n, 0);
    for (int v = 0; v < n; ++v)
        closed[v] = 1u << v;
    for (auto [u, v] : checked.edges) {
        closed[u - 1] |= 1u << (v - 1);
        closed[v - 1] |= 1u << (u - 1);
    }
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) > k)
            continue;
        bool dominating = true;
        for (int v = 0; v < n && dominating; ++v)
            dominating = (closed[v] & mask) != 0;
        if (dominating)
            return true;
    }
    return false;
}

// Exact-weight semantics: some assignment setting exactly k variables
// true satisfies the formula.
inline bool brute_wcs3(const AntimonotoneFormula& phi, int k)
{
    validate_formula(phi);
    const int n = phi.variables;
    if (n > 20)
        raise(Errc::instance_too_large, "satisfiability oracle capped at 20 variables");
    if (k < 0 || k > n)
        return false;

    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k)
            continue;
        bool all = true;
        for (const auto& groups : phi.conjuncts) {
            bool any = false;
            for (const auto& lits : groups) {
                bool group_true = true;
                for (int v : lits)
                    group_true = group_true && !(mask & (1u << (v - 1)));
                if (group_true) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

// Seeded uniform profile: one generator for the whole profile, each list a
// Fisher-Yates shuffle of 1..n_items drawn agent by agent.
inline Profile random_profile(int n_agents, int n_items, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<ItemSet> lists(n_agents);
    for (auto& list : lists) {
        list.resize(n_items);
        for (int i = 0; i < n_items; ++i)
            list[i] = i + 1;
        for (int i = n_items - 1; i > 0; --i)
            std::swap(list[i], list[rng() % static_cast<std::uint64_t>(i + 1)]);
    }
    return make_profile(std::move(lists));
}

} // namespace pid
