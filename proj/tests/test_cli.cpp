#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pid/pid.hpp"
#include "support/testutil.hpp"

using namespace pid;
using testutil::code_of;

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(PID_DATA_DIR "/") + name; }

fs::path tmp_dir()
{
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "pid_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_tmp(const std::string& name, const std::string& text)
{
    fs::path p = tmp_dir() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

InstanceFile parse_str(const std::string& text)
{
    std::istringstream in(text);
    return parse_instance(in);
}

// value of `key: ...` in a rendered document, if the line exists
std::optional<std::string> doc_value(const std::string& text, const std::string& key)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos || line.substr(0, colon) != key)
            continue;
        std::string v = line.substr(colon + 1);
        if (!v.empty() && v.front() == ' ')
            v.erase(0, 1);
        return v;
    }
    return std::nullopt;
}

ItemSet ints_of(const std::string& s)
{
    std::istringstream in(s);
    ItemSet out;
    for (Item v; in >> v;)
        out.push_back(v);
    return out;
}

// rebuilds the allocation printed as per-agent lines
Allocation doc_allocation(const std::string& text, const Profile& p)
{
    Allocation a;
    for (int agent = 0; agent < p.n(); ++agent) {
        auto line = doc_value(text, p.agents[agent]);
        REQUIRE(line.has_value());
        for (Item x : ints_of(*line))
            a.owner[x] = agent;
    }
    return a;
}

std::string drop_last_column(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        out += line.substr(0, line.rfind(','));
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("instance files round-trip through render and parse", "[io]")
{
    Profile demo = testutil::demo7();
    InstanceFile back = parse_str(render_instance(demo));
    CHECK(back.profile == demo);
    CHECK_FALSE(back.k.has_value());

    InstanceFile with_k = parse_str(render_instance(demo, 2));
    CHECK(with_k.profile == demo);
    CHECK(with_k.k == 2);

    for (int m : {0, 1, 3, 6, 9})
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            Profile p = random_profile(3, m, seed);
            CHECK(parse_str(render_instance(p)).profile == p);
        }

    GeneratedInstance inst = from_dominating_set(make_graph(3, {{1, 2}, {2, 3}}), 1);
    InstanceFile gen = parse_str(render_instance(inst.profile, inst.k));
    CHECK(gen.profile == inst.profile);
    CHECK(gen.k == 1);

    CHECK(render_instance(testutil::demo7()) ==
          "pid 1\n3 7\n1 3 2 4 6 5 7\n3 1 5 2 7 4 6\n2 4 5 3 6 7 1\n");

    // deleted profiles keep their ids and have no file form
    CHECK(code_of([&] { render_instance(delete_items(demo, {2})); }) ==
          Errc::assumption_violated);
}

TEST_CASE("instance parsing accepts comments and rejects malformed text", "[io]")
{
    InstanceFile f = parse_str("# banner\npid 1\n\n2 2 # counts\n1 2\n2 1\r\nk 1\n");
    CHECK(f.profile.n() == 2);
    CHECK(f.profile.lists[1] == ItemSet{2, 1});
    CHECK(f.k == 1);

    InstanceFile empty = parse_str("pid 1\n2 0\n");
    CHECK(empty.profile.n() == 2);
    CHECK(empty.profile.m() == 0);

    auto code = [](const std::string& text) { return code_of([&] { parse_str(text); }); };
    CHECK(code("") == Errc::parse_error);
    CHECK(code("pid 2\n1 1\n1\n") == Errc::parse_error);
    CHECK(code("pid 1\nx y\n") == Errc::parse_error);
    CHECK(code("pid 1\n0 2\n") == Errc::parse_error);
    CHECK(code("pid 1\n1 2\n1\n") == Errc::parse_error);          // short line
    CHECK(code("pid 1\n1 2\n1 2 1\n") == Errc::parse_error);      // long line
    CHECK(code("pid 1\n1 2\n1 2\nj 3\n") == Errc::parse_error);   // bad k line
    CHECK(code("pid 1\n1 2\n1 2\nk 1\n1\n") == Errc::parse_error) // trailing content
    ;
    CHECK(code("pid 1\n1 2\n1 1\n") == Errc::duplicate_item_in_list);
    CHECK(code("pid 1\n1 2\n1 3\n") == Errc::unknown_item);
    CHECK(code("pid 1\n2 2\n1 2\n2\n") == Errc::parse_error);
}

TEST_CASE("graph parsing", "[io]")
{
    std::istringstream k3("# triangle\np 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    Graph g = parse_graph(k3);
    CHECK(g.vertices == 3);
    CHECK(g.edges.size() == 3);

    auto code = [](const std::string& text) {
        return code_of([&] {
            std::istringstream in(text);
            parse_graph(in);
        });
    };
    CHECK(code("") == Errc::parse_error);
    CHECK(code("q 1 0\n") == Errc::parse_error);
    CHECK(code("p 2 2\ne 1 2\n") == Errc::parse_error);       // edge count mismatch
    CHECK(code("p 2 1\nf 1 2\n") == Errc::parse_error);       // bad edge tag
    CHECK(code("p 2 1\ne 1 1\n") == Errc::assumption_violated);
    CHECK(code("p 2 1\ne 1 3\n") == Errc::assumption_violated);
}

TEST_CASE("formula parsing", "[io]")
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_formula(in);
    };

    AntimonotoneFormula phi = parse("vars 3\n(!x1) & (!x2)\n");
    CHECK(phi.variables == 3);
    CHECK(phi.conjuncts == std::vector<std::vector<std::vector<int>>>{{{1}}, {{2}}});

    AntimonotoneFormula nested = parse("((!x1 & !x2) | !x3) & (!x2)");
    CHECK(nested.variables == 3); // defaults to the largest index
    CHECK(nested.conjuncts ==
          std::vector<std::vector<std::vector<int>>>{{{1, 2}, {3}}, {{2}}});

    CHECK(parse("(!x1 & !x2 | !x4)").conjuncts ==
          std::vector<std::vector<std::vector<int>>>{{{1, 2}, {4}}});

    auto code = [&](const std::string& text) { return code_of([&] { parse(text); }); };
    CHECK(code("") == Errc::parse_error);
    CHECK(code("(x1)") == Errc::parse_error);   // positive literal
    CHECK(code("(!x0)") == Errc::parse_error);  // indices are 1-based
    CHECK(code("(!x1") == Errc::parse_error);
    CHECK(code("(!x1) junk") == Errc::parse_error);
    CHECK(code("vars 1\n(!x2)") == Errc::parse_error);
    CHECK(code("vars\n(!x1)") == Errc::parse_error);
}

TEST_CASE("result documents render in insertion order", "[io]")
{
    ResultDocument doc;
    doc.add("status", "solved");
    doc.add("size", 2LL);
    doc.add("deleted", ItemSet{4, 7});
    doc.add("note", "");
    CHECK(doc.render() == "status: solved\nsize: 2\ndeleted: 4 7\nnote:\n");
    CHECK(doc.value("size") == "2");
    CHECK_FALSE(doc.value("missing").has_value());
}

TEST_CASE("check decides allocation existence through exit codes", "[cli]")
{
    RunResult blocked = run({"check", data("demo7.pid")});
    CHECK(blocked.code == 1);
    CHECK(doc_value(blocked.out, "status") == "obstruction");
    CHECK(doc_value(blocked.out, "cuts") == "4 4 4");
    CHECK(doc_value(blocked.out, "witness") == "1 2 3 4 5");

    RunResult fine = run({"check", data("demo7_minus2.pid")});
    CHECK(fine.code == 0);
    CHECK(doc_value(fine.out, "status") == "allocation");
    InstanceFile f = parse_str(
        std::string("pid 1\n3 6\n1 2 3 5 4 6\n2 1 4 6 3 5\n3 4 2 5 6 1\n"));
    CHECK(verify_allocation(f.profile, doc_allocation(fine.out, f.profile)));

    std::string dup = write_tmp("dup.pid", "pid 1\n2 2\n1 1\n2 1\n");
    CHECK(run({"check", dup}).code == 2);
    CHECK(run({"check", tmp_dir().string() + "/absent.pid"}).code == 2);
}

TEST_CASE("solve honours method selection and decision bounds", "[cli]")
{
    RunResult three = run({"solve", data("demo7.pid"), "--method", "three", "-k", "1"});
    CHECK(three.code == 0);
    CHECK(doc_value(three.out, "decision") == "yes");
    CHECK(doc_value(three.out, "size") == "1");
    CHECK(doc_value(three.out, "deleted") == "2");

    RunResult brute = run({"solve", data("demo7.pid"), "--method", "brute"});
    CHECK(brute.code == 0);
    CHECK(doc_value(brute.out, "size") == "1");
    CHECK(doc_value(brute.out, "deleted") == "2");

    // the printed allocation really is proportional after the deletion
    Profile rest = delete_items(testutil::demo7(), {2});
    CHECK(verify_allocation(rest, doc_allocation(three.out, rest)));

    RunResult too_tight = run({"solve", data("demo7.pid"), "-k", "0"});
    CHECK(too_tight.code == 1);
    CHECK(doc_value(too_tight.out, "decision") == "no");

    RunResult bounded_no = run({"solve", data("demo7.pid"), "--method", "bounded", "-k", "0"});
    CHECK(bounded_no.code == 1);
    CHECK(doc_value(bounded_no.out, "status") == "decision");
    CHECK_FALSE(doc_value(bounded_no.out, "size").has_value());

    CHECK(run({"solve", data("rand8x4.pid"), "--method", "three"}).code == 2);
    CHECK(run({"solve", data("rand8x4.pid"), "--method", "bounded"}).code == 2);

    RunResult auto4 = run({"solve", data("rand8x4.pid")});
    CHECK(auto4.code == 0);
    CHECK(doc_value(auto4.out, "method") == "brute");
    RunResult auto4k = run({"solve", data("rand8x4.pid"), "-k", "0"});
    CHECK(auto4k.code == 0);
    CHECK(doc_value(auto4k.out, "method") == "bounded");
}

TEST_CASE("verify checks a proposed deletion set", "[cli]")
{
    RunResult yes = run({"verify", data("demo7.pid"), "2"});
    CHECK(yes.code == 0);
    CHECK(doc_value(yes.out, "status") == "valid");
    Profile rest = delete_items(testutil::demo7(), {2});
    CHECK(verify_allocation(rest, doc_allocation(yes.out, rest)));

    RunResult empty = run({"verify", data("demo7.pid")});
    CHECK(empty.code == 1);
    CHECK(doc_value(empty.out, "status") == "invalid");

    CHECK(run({"verify", data("demo7.pid"), "9"}).code == 2);
}

TEST_CASE("three and brute agree on every small bundled fixture", "[cli]")
{
    int fixtures = 0;
    for (const auto& entry : fs::directory_iterator(PID_DATA_DIR)) {
        if (entry.path().extension() != ".pid")
            continue;
        std::ifstream in(entry.path());
        InstanceFile f = parse_instance(in);
        if (f.profile.n() != 3 || f.profile.m() > 10)
            continue;
        ++fixtures;
        RunResult three = run({"solve", entry.path().string(), "--method", "three"});
        RunResult brute = run({"solve", entry.path().string(), "--method", "brute"});
        INFO(entry.path().string());
        CHECK(three.code == 0);
        CHECK(brute.code == 0);
        CHECK(doc_value(three.out, "size") == doc_value(brute.out, "size"));
    }
    CHECK(fixtures >= 3);
}

TEST_CASE("gen writes deterministic, parseable instances", "[cli]")
{
    RunResult a = run({"gen", "random", "--agents", "3", "--items", "9", "--seed", "7"});
    RunResult b = run({"gen", "random", "--agents", "3", "--items", "9", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != run({"gen", "random", "--agents", "3", "--items", "9", "--seed", "8"}).out);
    CHECK(parse_str(a.out).profile == random_profile(3, 9, 7));

    RunResult with_k =
        run({"gen", "random", "--agents", "3", "--items", "6", "--seed", "1", "-k", "2"});
    CHECK(parse_str(with_k.out).k == 2);

    RunResult domset = run({"gen", "domset", "--graph", data("k3.graph"), "-k", "1"});
    CHECK(domset.code == 0);
    InstanceFile tri = parse_str(domset.out);
    CHECK(tri.profile.n() == 16);
    CHECK(tri.profile.m() == 33);
    CHECK(tri.k == 1);

    RunResult wcs = run({"gen", "wcs3", "--formula", data("phi1.formula"), "-k", "1"});
    CHECK(wcs.code == 0);
    InstanceFile phi = parse_str(wcs.out);
    CHECK(phi.profile.n() == 6);
    CHECK(phi.profile.m() == 13);

    // file output matches the stream output byte for byte
    std::string out_path = (tmp_dir() / "gen_k3.pid").string();
    CHECK(run({"gen", "domset", "--graph", data("k3.graph"), "-k", "1", "-o", out_path}).code ==
          0);
    std::ifstream written(out_path, std::ios::binary);
    std::stringstream sink;
    sink << written.rdbuf();
    CHECK(sink.str() == domset.out);

    std::string positive = write_tmp("positive.formula", "(x1)\n");
    CHECK(run({"gen", "wcs3", "--formula", positive, "-k", "1"}).code == 2);
    std::string tight = write_tmp("tight.formula", "(!x1)\n");
    CHECK(run({"gen", "wcs3", "--formula", tight, "-k", "1"}).code == 2);
    CHECK(run({"gen", "domset", "--graph", data("k3.graph"), "-k", "4"}).code == 2);
    CHECK(run({"gen", "domset", "--graph", data("k3.graph"), "-k", "-1"}).code == 2);
    CHECK(run({"gen", "random", "--agents", "0", "--items", "3"}).code == 2);
}

TEST_CASE("bench emits one CSV row per size and trial", "[cli]")
{
    RunResult a = run({"bench", "--sizes", "9,10", "--trials", "2", "--seed", "5"});
    CHECK(a.code == 0);

    std::istringstream lines(a.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "items,trial,seed,min_size,memo_entries,recursions,wall_ms");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        if (line.rfind("10,", 0) == 0) {
            // 10 items cannot be split three ways without deletions
            std::vector<std::string> cells;
            std::stringstream row(line);
            for (std::string cell; std::getline(row, cell, ',');)
                cells.push_back(cell);
            REQUIRE(cells.size() == 7);
            CHECK(std::stoi(cells[3]) >= 1);
        }
    }
    CHECK(rows == 4);

    RunResult b = run({"bench", "--sizes", "9,10", "--trials", "2", "--seed", "5"});
    CHECK(drop_last_column(a.out) == drop_last_column(b.out));

    CHECK(run({"bench", "--sizes", "9", "--trials", "0"}).code == 2);
    CHECK(run({"bench", "--sizes", "9", "-o", "/nonexistent_dir/x.csv"}).code == 2);
}

TEST_CASE("usage errors exit with 2, help with 0", "[cli]")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"solve", data("demo7.pid"), "--method", "nonsense"}).code == 2);
    CHECK(run({"gen"}).code == 2);

    RunResult help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("solve") != std::string::npos);
    CHECK(help.out.find("bench") != std::string::npos);
}
