// Acceptance battery: one line per criterion, nonzero exit when any fails.
// Bound constants and tolerances are pinned here, not read from anywhere.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ri/cli.hpp"
#include "ri/experiments.hpp"

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool replay_determinism() {
    const fs::path root = fs::temp_directory_path() / "ri-acceptance";
    fs::remove_all(root);
    const char* files[3] = {"verify.json", "counterexample.json", "sweep.json"};
    for (const char* side : {"a", "b"}) {
        const fs::path dir = root / side;
        fs::create_directories(dir);
        const std::string quiet = " > /dev/null 2>&1";
        const std::string tool = RITOOL_PATH;
        if (!run_cmd(tool + " verify all --seed 7 --out " +
                     (dir / files[0]).string() + quiet))
            return false;
        if (!run_cmd(tool + " counterexample --out " +
                     (dir / files[1]).string() + quiet))
            return false;
        if (!run_cmd(tool + " sweep --seed 7 --instances 120 --out " +
                     (dir / files[2]).string() + quiet))
            return false;
    }
    for (const char* name : files) {
        const std::string a = slurp(root / "a" / name);
        const std::string b = slurp(root / "b" / name);
        if (a.empty() || a != b) return false;
    }
    return true;
}

}  // namespace

int main() {
    using ri::cli::CheckOutcome;
    int failures = 0;
    const auto record = [&](int id, const char* name, bool pass, double secs) {
        std::printf("criterion %2d (%s): %s (%.1fs)\n", id, name,
                    pass ? "PASS" : "FAIL", secs);
        std::fflush(stdout);
        if (!pass) ++failures;
    };
    const std::uint64_t seed = 1;

    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_split_sandwich(seed, 200);
        const double secs = seconds_since(t0);
        record(1, "split-sandwich", o.pass && secs < 30.0, secs);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_k_sandwich(seed, 100);
        record(2, "k-orlicz-sandwich", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_k_interpolation(seed, 100);
        record(3, "k-interpolation", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_dilation(seed, 100);
        record(4, "dilation-law", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_tangency(seed, 200);
        record(5, "decoupling-correctness", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::verify_tails(seed, 25);
        record(6, "tail-domination", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome levy = ri::cli::verify_levy(seed, 40);
        const CheckOutcome kol = ri::cli::verify_kolmogorov(seed, 50);
        record(7, "levy-kolmogorov", levy.pass && kol.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = true;
        const struct {
            int k, n1;
            double bound;
        } cases[3] = {{2, 4, 1.0}, {2, 8, 8.0}, {3, 8, 16.0 / 72.0}};
        for (const auto& c : cases) {
            const CheckOutcome o = ri::cli::run_counterexample(c.k, c.n1);
            const double bound = o.report.at("bound").at("value").get<double>();
            pass = pass && o.pass && std::abs(bound - c.bound) <= 1e-12;
        }
        const double secs = seconds_since(t0);
        record(8, "sharpness-blowup", pass && secs < 60.0, secs);
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const CheckOutcome o = ri::cli::run_sweep(seed, 500);
        record(9, "constant-sweep", o.pass, seconds_since(t0));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const bool pass = replay_determinism();
        record(10, "replay-determinism", pass, seconds_since(t0));
    }

    if (failures > 0) {
        std::printf("%d of 10 criteria failed\n", failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
