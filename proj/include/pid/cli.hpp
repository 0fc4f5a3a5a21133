#pragma once

// Subcommand front end.  Decisions travel through the exit code: 0 means
// yes/success, 1 means no, 2 means misuse, unreadable input or a generator
// precondition failure.  Everything else is an ordered-key result document
// on stdout, byte-stable across reruns unless --timing is given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "pid/io.hpp"
#include "pid/oracle.hpp"
#include "pid/three_agent.hpp"

namespace pid {

namespace detail {

inline InstanceFile load_instance(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::parse_error, "cannot read '" + path + "'");
    return parse_instance(in);
}

inline Graph load_graph(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::parse_error, "cannot read '" + path + "'");
    return parse_graph(in);
}

inline AntimonotoneFormula load_formula(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::parse_error, "cannot read '" + path + "'");
    return parse_formula(in);
}

inline int write_output(const std::string& path, const std::string& text, std::ostream& out,
                        std::ostream& err)
{
    if (path.empty()) {
        out << text;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (f)
        f << text << std::flush;
    if (!f) {
        err << "cannot write '" << path << "'\n";
        return 2;
    }
    return 0;
}

inline std::uint64_t split_mix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// per-row instance seed; a pure mix keeps the stream independent of the
// order sizes and trials are listed in
inline std::uint64_t bench_seed(std::uint64_t seed, int items, int trial)
{
    return split_mix(split_mix(split_mix(seed) ^ static_cast<std::uint64_t>(items)) ^
                     static_cast<std::uint64_t>(trial));
}

inline long long elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
}

inline int do_check(const std::string& path, std::ostream& out)
{
    InstanceFile f = load_instance(path);
    ResultDocument doc;
    if (f.profile.m() == 0) {
        doc.add("status", "allocation");
        add_allocation(doc, f.profile, Allocation{});
        out << doc.render();
        return 0;
    }
    auto got = find_minimal_obstruction(f.profile);
    if (auto* alloc = std::get_if<Allocation>(&got)) {
        doc.add("status", "allocation");
        add_allocation(doc, f.profile, *alloc);
        out << doc.render();
        return 0;
    }
    const auto& cert = std::get<ObstructionCertificate>(got);
    doc.add("status", "obstruction");
    doc.add("cuts", cert.prefix.cuts);
    doc.add("witness", cert.witness_items);
    out << doc.render();
    return 1;
}

inline int do_solve(const std::string& path, std::string method, std::optional<int> k_flag,
                    bool timing, std::ostream& out, std::ostream& err)
{
    InstanceFile f = load_instance(path);
    const Profile& p = f.profile;
    std::optional<int> k = k_flag ? k_flag : f.k;

    if (method == "auto")
        method = p.n() == 3 ? "three" : (k ? "bounded" : "brute");
    if (method == "three" && p.n() != 3) {
        err << "method 'three' needs exactly 3 agents, instance has " << p.n() << "\n";
        return 2;
    }
    if (method == "bounded" && !k) {
        err << "method 'bounded' needs a bound; pass --k or add a k line\n";
        return 2;
    }

    ResultDocument doc;
    auto t0 = std::chrono::steady_clock::now();
    int code = 0;

    if (method == "three") {
        Solve3Result res = solve3(p, k);
        doc.add("status", "solved");
        doc.add("method", method);
        if (k) {
            doc.add("k", *k);
            doc.add("decision", *res.within_k ? "yes" : "no");
            code = *res.within_k ? 0 : 1;
        }
        doc.add("size", res.solution.size);
        doc.add("deleted", res.solution.deleted);
        add_allocation(doc, p, res.solution.allocation);
        doc.add("memo_entries", res.stats.memo_entries);
        doc.add("recursions", res.stats.recursions);
    } else if (method == "brute") {
        Solution s = solve_exhaustive(p);
        doc.add("status", "solved");
        doc.add("method", method);
        if (k) {
            doc.add("k", *k);
            doc.add("decision", s.size <= *k ? "yes" : "no");
            code = s.size <= *k ? 0 : 1;
        }
        doc.add("size", s.size);
        doc.add("deleted", s.deleted);
        add_allocation(doc, p, s.allocation);
    } else { // bounded
        auto got = solve_bounded(p, *k);
        doc.add("status", got ? "solved" : "decision");
        doc.add("method", method);
        doc.add("k", *k);
        doc.add("decision", got ? "yes" : "no");
        if (got) {
            doc.add("size", got->size);
            doc.add("deleted", got->deleted);
            add_allocation(doc, p, got->allocation);
        }
        code = got ? 0 : 1;
    }

    if (timing)
        doc.add("wall_ms", elapsed_ms(t0));
    out << doc.render();
    return code;
}

inline int do_verify(const std::string& path, const std::vector<Item>& items, std::ostream& out)
{
    InstanceFile f = load_instance(path);
    ItemSet deleted = normalized(ItemSet(items.begin(), items.end()));
    Profile rest = delete_items(f.profile, deleted);
    auto alloc = find_proportional_allocation(rest);
    ResultDocument doc;
    doc.add("status", alloc ? "valid" : "invalid");
    doc.add("deleted", deleted);
    if (alloc)
        add_allocation(doc, f.profile, *alloc);
    out << doc.render();
    return alloc ? 0 : 1;
}

inline int do_bench(const std::vector<int>& sizes, int trials, std::uint64_t seed,
                    const std::string& out_path, std::ostream& out, std::ostream& err)
{
    std::string csv = "items,trial,seed,min_size,memo_entries,recursions,wall_ms\n";
    for (int items : sizes)
        for (int trial = 1; trial <= trials; ++trial) {
            std::uint64_t s = bench_seed(seed, items, trial);
            Profile p = random_profile(3, items, s);
            auto t0 = std::chrono::steady_clock::now();
            Solve3Result res = solve3(p);
            long long ms = elapsed_ms(t0);
            csv += std::to_string(items) + ',' + std::to_string(trial) + ',' +
                   std::to_string(s) + ',' + std::to_string(res.solution.size) + ',' +
                   std::to_string(res.stats.memo_entries) + ',' +
                   std::to_string(res.stats.recursions) + ',' + std::to_string(ms) + '\n';
        }
    return write_output(out_path, csv, out, err);
}

} // namespace detail

// Parses `args` (no program name) and runs one subcommand against the
// given streams.  Reusable in-process; returns the process exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"exact solvers for proportionality by item deletion"};
    app.name("pid");
    app.require_subcommand(1);

    std::string check_path;
    auto* check = app.add_subcommand("check", "decide whether the instance admits a "
                                              "proportional allocation (exit 0) or print a "
                                              "minimal obstruction (exit 1)");
    check->add_option("file", check_path, "instance file")->required();

    std::string solve_path, method = "auto";
    std::optional<int> k_flag;
    bool timing = false;
    auto* solve = app.add_subcommand("solve", "compute a minimum deletion set; with a bound k "
                                              "the exit code decides size <= k");
    solve->add_option("file", solve_path, "instance file")->required();
    solve->add_option("--method", method, "auto, three, brute or bounded")
        ->check(CLI::IsMember({"auto", "three", "brute", "bounded"}));
    solve->add_option("-k,--bound", k_flag, "decision bound; defaults to the instance's k line");
    solve->add_flag("--timing", timing, "append wall_ms (makes reruns differ)");

    std::string verify_path;
    std::vector<Item> verify_items;
    auto* verify = app.add_subcommand("verify", "exit 0 iff deleting the given items makes the "
                                                "instance proportional");
    verify->add_option("file", verify_path, "instance file")->required();
    verify->add_option("items", verify_items, "deleted item ids");

    auto* gen = app.add_subcommand("gen", "write instance files");
    gen->require_subcommand(1);
    int g_agents = 0, g_items = 0;
    std::uint64_t g_seed = 0;
    std::optional<int> g_k;
    std::string g_out, g_graph, g_formula;
    int g_bound = 0;
    auto* g_random = gen->add_subcommand("random", "seeded uniform preference lists");
    g_random->add_option("--agents", g_agents, "agent count")->required();
    g_random->add_option("--items", g_items, "item count")->required();
    g_random->add_option("--seed", g_seed, "RNG seed");
    g_random->add_option("-k,--bound", g_k, "write a k line");
    g_random->add_option("-o,--out", g_out, "output path (default stdout)");
    auto* g_domset = gen->add_subcommand("domset", "reduction from dominating set; the "
                                                   "instance has a size-k solution iff the "
                                                   "graph has a dominating set of size k");
    g_domset->add_option("--graph", g_graph, "edge list: 'p <n> <m>' then m lines 'e <u> <v>'")
        ->required();
    g_domset->add_option("-k,--bound", g_bound, "dominating-set size")->required();
    g_domset->add_option("-o,--out", g_out, "output path (default stdout)");
    auto* g_wcs3 = gen->add_subcommand(
        "wcs3", "reduction from antimonotone weighted satisfiability; formula grammar: "
                "[vars <n>] clause {'&' clause}, clause := '(' group {'|' group} ')', "
                "group := '!x<i>' {'&' '!x<i>'} with optional parentheses");
    g_wcs3->add_option("--formula", g_formula, "formula file")->required();
    g_wcs3->add_option("-k,--bound", g_bound, "assignment weight")->required();
    g_wcs3->add_option("-o,--out", g_out, "output path (default stdout)");

    std::vector<int> b_sizes;
    int b_trials = 1;
    std::uint64_t b_seed = 0;
    std::string b_out;
    auto* bench = app.add_subcommand("bench", "time the three-agent solver on seeded random "
                                              "instances and emit CSV");
    bench->add_option("--sizes", b_sizes, "item counts, comma separated")
        ->required()
        ->delimiter(',');
    bench->add_option("--trials", b_trials, "instances per size");
    bench->add_option("--seed", b_seed, "stream seed");
    bench->add_option("-o,--out", b_out, "CSV path (default stdout)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return detail::do_check(check_path, out);
        if (solve->parsed())
            return detail::do_solve(solve_path, method, k_flag, timing, out, err);
        if (verify->parsed())
            return detail::do_verify(verify_path, verify_items, out);
        if (g_random->parsed()) {
            if (g_agents < 1 || g_items < 0) {
                err << "need --agents >= 1 and --items >= 0\n";
                return 2;
            }
            Profile p = random_profile(g_agents, g_items, g_seed);
            return detail::write_output(g_out, render_instance(p, g_k), out, err);
        }
        if (g_domset->parsed()) {
            GeneratedInstance inst = from_dominating_set(detail::load_graph(g_graph), g_bound);
            return detail::write_output(g_out, render_instance(inst.profile, inst.k), out, err);
        }
        if (g_wcs3->parsed()) {
            GeneratedInstance inst = from_wcs3(detail::load_formula(g_formula), g_bound);
            return detail::write_output(g_out, render_instance(inst.profile, inst.k), out, err);
        }
        if (bench->parsed()) {
            if (b_trials < 1) {
                err << "--trials must be at least 1\n";
                return 2;
            }
            for (int s : b_sizes)
                if (s < 0) {
                    err << "--sizes must be nonnegative\n";
                    return 2;
                }
            return detail::do_bench(b_sizes, b_trials, b_seed, b_out, out, err);
        }
    } catch (const Error& e) {
        err << e.what() << '\n'; // what() already carries the errc name
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2; // not reached: a subcommand is required
}

} // namespace pid
