#pragma once

// Text formats.
//
// Instance files (canonical rendering is bit-exact, LF only):
//   pid 1
//   <n_agents> <n_items>
//   <n_agents lines: space-separated 1-based item ids>
//   k <int>              (optional)
// '#' starts a comment anywhere; blank lines are ignored; an instance with
// zero items carries no preference lines at all.
//
// Graphs are edge lists: a header `p <n> <m>` followed by exactly m lines
// `e u v` with 1-based endpoints.
//
// Formulas are antimonotone three-level expressions over `!x<i>` literals:
//   file    := [ 'vars' <int> ] formula
//   formula := clause { '&' clause }
//   clause  := '(' group { '|' group } ')'
//   group   := lit { '&' lit }  |  '(' lit { '&' lit } ')'
// Without a 'vars' header the variable count is the largest index used.
//
// Result documents are ordered `key: value` lines; key order is fixed per
// command so rendered documents are byte-stable.

#include <cctype>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pid/generators.hpp"
#include "pid/matching.hpp"
#include "pid/model.hpp"

namespace pid {

struct InstanceFile {
    Profile profile;
    std::optional<int> k;
};

namespace detail {

// comment-stripped, non-blank lines; a trailing CR is tolerated on input
inline std::vector<std::string> logical_lines(std::istream& in)
{
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                blank = false;
        if (!blank)
            out.push_back(line);
    }
    return out;
}

inline std::vector<long long> line_ints(const std::string& line, const std::string& what)
{
    std::istringstream in(line);
    std::vector<long long> out;
    long long v = 0;
    while (in >> v)
        out.push_back(v);
    if (!in.eof())
        raise(Errc::parse_error, what + " must contain integers only, got '" + line + "'");
    return out;
}

inline std::string join_ints(const std::vector<int>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace detail

inline InstanceFile parse_instance(std::istream& in)
{
    auto lines = detail::logical_lines(in);
    std::size_t pos = 0;
    auto need = [&](const std::string& what) -> const std::string& {
        if (pos >= lines.size())
            raise(Errc::parse_error, "unexpected end of input, expected " + what);
        return lines[pos++];
    };

    if (need("header 'pid 1'") != "pid 1")
        raise(Errc::parse_error, "first line must be 'pid 1'");

    auto counts = detail::line_ints(need("'<n_agents> <n_items>'"), "the count line");
    if (counts.size() != 2 || counts[0] < 1 || counts[1] < 0 || counts[1] > 1000000)
        raise(Errc::parse_error, "count line must be '<n_agents> <n_items>'");
    int n = static_cast<int>(counts[0]);
    int m = static_cast<int>(counts[1]);

    Profile p;
    for (int a = 1; a <= n; ++a)
        p.agents.push_back("a" + std::to_string(a));
    for (int x = 1; x <= m; ++x)
        p.items.push_back(x);
    if (m == 0) {
        p.lists.assign(n, {});
    } else {
        for (int a = 0; a < n; ++a) {
            auto ids = detail::line_ints(need("a preference line"), "a preference line");
            if (static_cast<int>(ids.size()) != m)
                raise(Errc::parse_error, "preference line of agent " + std::to_string(a + 1) +
                                             " has " + std::to_string(ids.size()) +
                                             " ids, expected " + std::to_string(m));
            std::vector<Item> list;
            list.reserve(ids.size());
            for (long long v : ids) {
                if (v < 1 || v > 1000000)
                    raise(Errc::parse_error, "item id out of range: " + std::to_string(v));
                list.push_back(static_cast<Item>(v));
            }
            p.lists.push_back(std::move(list));
        }
    }

    std::optional<int> k;
    if (pos < lines.size()) {
        std::istringstream kin(lines[pos]);
        std::string tag;
        long long kv = 0;
        kin >> tag >> kv;
        if (!kin || tag != "k" || !(kin >> std::ws).eof() || kv < 0 || kv > 1000000)
            raise(Errc::parse_error, "trailing line is not 'k <int>': '" + lines[pos] + "'");
        k = static_cast<int>(kv);
        ++pos;
    }
    if (pos != lines.size())
        raise(Errc::parse_error, "unexpected content after the instance: '" + lines[pos] + "'");

    validate(p);
    return {std::move(p), k};
}

// Canonical form; parse(render(p)) == p.  The format declares the universe
// as 1..m, so profiles with gaps in their ids (deleted profiles keep the
// surviving ids) have no file form.
inline std::string render_instance(const Profile& p, std::optional<int> k = std::nullopt)
{
    for (int x = 0; x < p.m(); ++x)
        if (p.items[x] != x + 1)
            raise(Errc::assumption_violated, "only 1..m universes have a file form", {},
                  p.items[x]);
    std::string out = "pid 1\n";
    out += std::to_string(p.n());
    out += ' ';
    out += std::to_string(p.m());
    out += '\n';
    if (p.m() > 0)
        for (const auto& list : p.lists) {
            out += detail::join_ints(list);
            out += '\n';
        }
    if (k) {
        out += "k ";
        out += std::to_string(*k);
        out += '\n';
    }
    return out;
}

inline Graph parse_graph(std::istream& in)
{
    auto lines = detail::logical_lines(in);
    if (lines.empty())
        raise(Errc::parse_error, "empty graph file, expected 'p <n> <m>'");
    std::istringstream head(lines[0]);
    std::string tag;
    long long n = 0, m = 0;
    head >> tag >> n >> m;
    if (!head || tag != "p" || !(head >> std::ws).eof() || n < 0 || m < 0 || n > 1000000)
        raise(Errc::parse_error, "graph header must be 'p <n> <m>'");
    if (static_cast<long long>(lines.size()) != 1 + m)
        raise(Errc::parse_error, "expected " + std::to_string(m) + " edge lines, got " +
                                     std::to_string(lines.size() - 1));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ein(lines[i]);
        long long u = 0, v = 0;
        ein >> tag >> u >> v;
        if (!ein || tag != "e" || !(ein >> std::ws).eof())
            raise(Errc::parse_error, "edge line must be 'e <u> <v>': '" + lines[i] + "'");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return make_graph(static_cast<int>(n), edges);
}

namespace detail {

struct FormulaParser {
    std::string text;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool eat(char c)
    {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what)
    {
        raise(Errc::parse_error, what + " at offset " + std::to_string(pos));
    }

    int literal()
    {
        if (!eat('!'))
            fail("expected a negated literal '!x<i>'");
        skip();
        if (pos >= text.size() || text[pos] != 'x')
            fail("expected 'x' after '!'");
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (start == pos || pos - start > 6)
            fail("expected a variable index");
        int v = std::stoi(text.substr(start, pos - start));
        if (v < 1)
            fail("variable indices are 1-based");
        return v;
    }

    std::vector<int> group()
    {
        std::vector<int> lits;
        if (eat('(')) {
            lits.push_back(literal());
            while (eat('&'))
                lits.push_back(literal());
            if (!eat(')'))
                fail("expected ')' closing a literal group");
        } else {
            lits.push_back(literal());
            while (eat('&'))
                lits.push_back(literal());
        }
        return lits;
    }

    std::vector<std::vector<int>> clause()
    {
        if (!eat('('))
            fail("expected '(' opening a clause");
        std::vector<std::vector<int>> groups;
        groups.push_back(group());
        while (eat('|'))
            groups.push_back(group());
        if (!eat(')'))
            fail("expected ')' closing a clause");
        return groups;
    }
};

} // namespace detail

inline AntimonotoneFormula parse_formula(std::istream& in)
{
    std::string text;
    for (const auto& line : detail::logical_lines(in)) {
        text += line;
        text += ' ';
    }
    detail::FormulaParser fp{text};

    std::optional<int> vars;
    fp.skip();
    if (text.compare(fp.pos, 4, "vars") == 0) {
        fp.pos += 4;
        fp.skip();
        std::size_t start = fp.pos;
        while (fp.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[fp.pos])))
            ++fp.pos;
        if (start == fp.pos || fp.pos - start > 6)
            fp.fail("expected a variable count after 'vars'");
        vars = std::stoi(text.substr(start, fp.pos - start));
    }

    AntimonotoneFormula phi;
    phi.conjuncts.push_back(fp.clause());
    while (fp.eat('&'))
        phi.conjuncts.push_back(fp.clause());
    fp.skip();
    if (fp.pos != text.size())
        fp.fail("unexpected trailing text");

    int max_var = 0;
    for (const auto& clause : phi.conjuncts)
        for (const auto& grp : clause)
            for (int v : grp)
                max_var = std::max(max_var, v);
    phi.variables = vars.value_or(max_var);
    if (phi.variables < max_var)
        raise(Errc::parse_error, "'vars' header is smaller than a used index");
    validate_formula(phi);
    return phi;
}

// -- result documents -------------------------------------------------------

struct ResultDocument {
    std::vector<std::pair<std::string, std::string>> fields; // render order

    void add(std::string key, std::string value)
    {
        fields.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, long long v) { add(std::move(key), std::to_string(v)); }
    void add(std::string key, const std::vector<int>& xs)
    {
        add(std::move(key), detail::join_ints(xs));
    }

    std::string render() const
    {
        std::string out;
        for (const auto& [key, value] : fields) {
            out += key;
            out += ':';
            if (!value.empty()) {
                out += ' ';
                out += value;
            }
            out += '\n';
        }
        return out;
    }

    // first value under `key`, if any; this is what the tests consume
    std::optional<std::string> value(std::string_view key) const
    {
        for (const auto& field : fields)
            if (field.first == key)
                return field.second;
        return std::nullopt;
    }
};

// one `<label>: <sorted items>` line per agent, in agent order
inline void add_allocation(ResultDocument& doc, const Profile& p, const Allocation& alloc)
{
    for (int a = 0; a < p.n(); ++a)
        doc.add(p.agents[a], bundle(alloc, a));
}

} // namespace pid
