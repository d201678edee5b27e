#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ri/cli.hpp"
#include "ri/measure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "ritool-clitest";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_tool(const std::string& args, const std::string& out_dir = "") {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    std::string cmd;
    if (!out_dir.empty()) cmd += "RITOOL_OUT_DIR='" + out_dir + "' ";
    cmd += std::string(RITOOL_PATH) + " " + args + " > '" + out.string() +
           "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

// every {"value": ...} object must carry a recognized provenance label
void check_provenance(const json& j, int& labeled_count) {
    if (j.is_object()) {
        if (j.contains("value")) {
            REQUIRE(j.contains("provenance"));
            const auto p = j.at("provenance").get<std::string>();
            const bool known = p == "exact" || p == "bisection(1e-10)" ||
                               p == "grid-upper-bound" ||
                               p.rfind("monte-carlo", 0) == 0;
            CHECK(known);
            ++labeled_count;
        }
        for (const auto& [key, sub] : j.items()) check_provenance(sub, labeled_count);
    } else if (j.is_array()) {
        for (const auto& sub : j) check_provenance(sub, labeled_count);
    }
}

fs::path write_variable() {
    const fs::path p = work_dir() / "var.json";
    std::ofstream out(p);
    out << R"({"atoms": [[2.0, 0.25], [-1.0, 0.5], [3.0, 0.25]]})";
    return p;
}

}  // namespace

TEST_CASE("missing command is a usage error") {
    const auto r = run_tool("");
    CHECK(r.code == 1);
    CHECK(r.err.find("command") != std::string::npos);
}

TEST_CASE("unknown flags and bad enums are usage errors") {
    CHECK(run_tool("verify --no-such-flag").code == 1);
    CHECK(run_tool("verify nonsense-check").code == 1);
    CHECK(run_tool("verify dilation --format yaml").code == 1);
}

TEST_CASE("norm command computes the three norm families") {
    const auto var = write_variable();
    const fs::path out = work_dir() / "norm1.json";
    auto r = run_tool("norm --input '" + var.string() + "' --p 2 --out '" +
                      out.string() + "'");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp(out));
    // E f^2 = 3.75
    CHECK(rep.at("cases").at(0).at("lhs").at("value").get<double>() ==
          doctest::Approx(std::sqrt(3.75)).epsilon(1e-12));
    CHECK(rep.at("cases").at(0).at("lhs").at("provenance") == "exact");

    const fs::path out2 = work_dir() / "norm2.json";
    r = run_tool("norm --input '" + var.string() + "' --phi power:2 --out '" +
                 out2.string() + "'");
    REQUIRE(r.code == 0);
    const json rep2 = json::parse(slurp(out2));
    CHECK(rep2.at("cases").at(0).at("lhs").at("value").get<double>() ==
          doctest::Approx(std::sqrt(3.75)).epsilon(1e-9));
    CHECK(rep2.at("cases").at(0).at("lhs").at("provenance") == "bisection(1e-10)");

    const fs::path out3 = work_dir() / "norm3.json";
    r = run_tool("norm --input '" + var.string() +
                 "' --p 2 --q 1 --out '" + out3.string() + "'");
    REQUIRE(r.code == 0);
    CHECK(json::parse(slurp(out3)).at("cases").at(0).at("lhs").at("value")
              .get<double>() > 0.0);

    CHECK(run_tool("norm --p 2").code == 1);  // no input
    const auto bad = run_tool("norm --input '" + var.string() + "' --phi cubic:3");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("phi") != std::string::npos);
}

TEST_CASE("kfunc emits a profile and a plot") {
    const auto var = write_variable();
    const fs::path out = work_dir() / "kf.json";
    const fs::path plot = work_dir() / "kf-plot.csv";
    const auto r = run_tool("kfunc --input '" + var.string() +
                            "' --p 1 --q 2 --grid default --plot '" + plot.string() +
                            "' --out '" + out.string() + "'");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp(out));
    CHECK(rep.at("cases").size() == 33);
    const std::string plotted = slurp(plot);
    CHECK(plotted.rfind("x,y\n", 0) == 0);
    CHECK(std::count(plotted.begin(), plotted.end(), '\n') == 34);
}

TEST_CASE("verify subcommand writes a labeled report") {
    const fs::path out = work_dir() / "dilation.json";
    const auto r = run_tool("verify dilation --count 12 --seed 3 --out '" +
                            out.string() + "'");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("pass") != std::string::npos);
    const json rep = json::parse(slurp(out));
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("cases").size() == 12);
    int labeled = 0;
    check_provenance(rep, labeled);
    CHECK(labeled > 0);
}

TEST_CASE("csv rendering uses the fixed column set") {
    const fs::path out = work_dir() / "dilation.csv";
    const auto r = run_tool("verify dilation --count 6 --seed 3 --format csv --out '" +
                            out.string() + "'");
    REQUIRE(r.code == 0);
    std::istringstream lines(slurp(out));
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "experiment,instance_id,param_json,lhs,rhs,ratio,pass");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.rfind("dilation,", 0) == 0);
        CHECK(line.find(",true") != std::string::npos);
    }
    CHECK(rows == 6);
}

TEST_CASE("default output lands in the directory named by the environment") {
    const fs::path dir = work_dir() / "envout";
    fs::create_directories(dir);
    const auto r = run_tool("verify dilation --count 4 --seed 3", dir.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "verify-dilation-report.json"));
}

TEST_CASE("stdout streaming with out dash") {
    const auto r = run_tool("verify dilation --count 4 --seed 3 --out -");
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep.at("pass").get<bool>());
}

TEST_CASE("config supplies flags and may name the command") {
    const fs::path cfg = work_dir() / "cfg.json";
    {
        std::ofstream f(cfg);
        f << R"({"command": "verify", "check": "dilation", "count": 5, "seed": 9,)"
          << R"( "out": ")" << (work_dir() / "cfg-out.json").string() << R"("})";
    }
    const auto r = run_tool("--config '" + cfg.string() + "'");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp(work_dir() / "cfg-out.json"));
    CHECK(rep.at("count").get<int>() == 5);
    CHECK(rep.at("seed").get<int>() == 9);

    // explicit flags beat config keys
    const fs::path out2 = work_dir() / "cfg-out2.json";
    const auto r2 = run_tool("verify dilation --config '" + cfg.string() +
                             "' --count 2 --out '" + out2.string() + "'");
    REQUIRE(r2.code == 0);
    CHECK(json::parse(slurp(out2)).at("count").get<int>() == 2);

    const fs::path broken = work_dir() / "broken.json";
    { std::ofstream f(broken); f << "{nope"; }
    const auto r3 = run_tool("--config '" + broken.string() + "'");
    CHECK(r3.code == 1);
    CHECK(r3.err.find("JSON") != std::string::npos);
}

TEST_CASE("decouple command checks a corpus and samples tails") {
    const fs::path out = work_dir() / "dec.json";
    const auto r = run_tool(
        "decouple --kind predictable --count 3 --max-depth 5 --seed 21 --out '" +
        out.string() + "'");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp(out));
    CHECK(rep.at("pass").get<bool>());
    REQUIRE(rep.at("cases").size() == 3);
    for (const auto& c : rep.at("cases")) {
        CHECK(c.at("tangent_ok").get<bool>());
        CHECK(c.at("tails_ok").get<bool>());
        CHECK(c.at("moments").size() == 3);
        if (c.contains("mc_tail")) {
            const auto prov =
                c.at("mc_tail").at("estimate").at("provenance").get<std::string>();
            CHECK(prov.rfind("monte-carlo(4096", 0) == 0);
        }
    }
    CHECK(run_tool("decouple --kind martingale").code == 1);
    CHECK(run_tool("decouple --max-depth 14").code == 1);
}

TEST_CASE("counterexample command reports the pinned bound") {
    const fs::path out = work_dir() / "cx.json";
    const auto r = run_tool("counterexample --k 2 --n1 8 --out '" + out.string() + "'");
    REQUIRE(r.code == 0);
    const json rep = json::parse(slurp(out));
    CHECK(rep.at("ratio").at("value") == "inf");
    CHECK(rep.at("bound").at("value").get<double>() == 8.0);
    CHECK(rep.at("pass").get<bool>());
    CHECK(rep.at("brute_agrees").get<bool>());

    // without sizes the three canonical cases run
    const fs::path out3 = work_dir() / "cx3.json";
    const auto r3 = run_tool("counterexample --out '" + out3.string() + "'");
    REQUIRE(r3.code == 0);
    CHECK(json::parse(slurp(out3)).at("runs").size() == 3);

    CHECK(run_tool("counterexample --k 1 --n1 4").code == 1);
}

TEST_CASE("replay determinism over the battery entry points") {
    const fs::path a = work_dir() / "det-a.json";
    const fs::path b = work_dir() / "det-b.json";
    const std::string args = "verify split-sandwich --count 8 --seed 5 --out ";
    REQUIRE(run_tool(args + "'" + a.string() + "'").code == 0);
    REQUIRE(run_tool(args + "'" + b.string() + "'").code == 0);
    const std::string ba = slurp(a), bb = slurp(b);
    CHECK_FALSE(ba.empty());
    CHECK(ba == bb);
}

TEST_CASE("library-level corpora are pure functions of their coordinates") {
    const auto a = ri::cli::random_variable(5, 9, 16);
    const auto b = ri::cli::random_variable(5, 9, 16);
    REQUIRE(a.size() == b.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.atoms()[i].value == b.atoms()[i].value);
        CHECK(a.atoms()[i].prob == b.atoms()[i].prob);
        mass += a.atoms()[i].prob;
    }
    CHECK(mass == 1.0);  // dyadic grains sum exactly

    const auto [f, g] = ri::cli::dominated_pair(5, 10, 12);
    REQUIRE(f.size() == g.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(f.atoms()[i].value) <=
              0.9 * std::abs(g.atoms()[i].value) + 1e-15);

    const auto s = ri::cli::small_support_variable(5, 11, 12, 0.5);
    double support = 0.0;
    for (const auto& atom : s.atoms())
        if (atom.value != 0.0) support += atom.prob;
    CHECK(support <= 0.5);

    const auto tuple = ri::cli::symmetric_tuple(5, 12);
    CHECK(tuple.size() >= 2);
    for (const auto& x : tuple) {
        const auto canon = x.canonical().atoms();
        const auto neg = x.negated().canonical().atoms();
        REQUIRE(canon.size() == neg.size());
        for (std::size_t i = 0; i < canon.size(); ++i) {
            CHECK(canon[i].value == neg[i].value);
            CHECK(canon[i].prob == neg[i].prob);
        }
    }
}
