#pragma once

// Shared primitives: item ids, sorted item sets, and the library error type.
// Item sets are kept as sorted, duplicate-free vectors so that every
// operation over them is deterministic and cheap to compare.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace pid {

using Item = int; // 1-based ids; deleted profiles keep the surviving ids
using ItemSet = std::vector<Item>;

enum class Errc {
    duplicate_item_in_list,
    missing_item,
    unknown_item,
    wrong_agent_count,
    irregular_shape,
    item_outside_prefix,
    empty_profile,
    instance_too_large,
    assumption_violated,
    parse_error,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::duplicate_item_in_list: return "duplicate_item_in_list";
    case Errc::missing_item: return "missing_item";
    case Errc::unknown_item: return "unknown_item";
    case Errc::wrong_agent_count: return "wrong_agent_count";
    case Errc::irregular_shape: return "irregular_shape";
    case Errc::item_outside_prefix: return "item_outside_prefix";
    case Errc::empty_profile: return "empty_profile";
    case Errc::instance_too_large: return "instance_too_large";
    case Errc::assumption_violated: return "assumption_violated";
    case Errc::parse_error: return "parse_error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::string agent = {}, Item item = -1)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what),
          code_(code), agent_(std::move(agent)), item_(item)
    {
    }

    Errc code() const { return code_; }
    const std::string& agent() const { return agent_; }
    Item item() const { return item_; }

private:
    Errc code_;
    std::string agent_;
    Item item_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what,
                               std::string agent = {}, Item item = -1)
{
    throw Error(code, what, std::move(agent), item);
}

// -- sorted-set helpers -------------------------------------------------

inline ItemSet make_set(std::initializer_list<Item> xs)
{
    ItemSet s(xs);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline ItemSet normalized(ItemSet s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool set_contains(const ItemSet& s, Item x)
{
    return std::binary_search(s.begin(), s.end(), x);
}

inline void set_insert(ItemSet& s, Item x)
{
    auto it = std::lower_bound(s.begin(), s.end(), x);
    if (it == s.end() || *it != x)
        s.insert(it, x);
}

inline ItemSet set_union(const ItemSet& a, const ItemSet& b)
{
    ItemSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline ItemSet set_intersect(const ItemSet& a, const ItemSet& b)
{
    ItemSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline ItemSet set_minus(const ItemSet& a, const ItemSet& b)
{
    ItemSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool is_subset(const ItemSet& a, const ItemSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace pid
