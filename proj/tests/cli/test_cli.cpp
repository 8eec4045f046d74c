#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pfkrylov/estimate_io.hpp"
#include "pfkrylov/io.hpp"

namespace fs = std::filesystem;
using namespace pfk;

namespace {

int sandbox_counter = 0;

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() /
              ("pfkcli_" + std::to_string(::getpid()) + "_" + std::to_string(sandbox_counter++));
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args, const std::string& out_file = "/dev/null",
            const std::string& err_file = "/dev/null") {
    const std::string cmd =
        std::string(PFK_CLI_PATH) + " " + args + " >" + out_file + " 2>" + err_file;
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char ch : text) n += ch == '\n';
    return n;
}

}  // namespace

TEST_CASE("synth length and value contracts") {
    Sandbox box;
    CHECK(run_cli("synth --T 1600 --seed 7 --out " + box("a.csv")) == 0);
    const std::string a = slurp(box("a.csv"));
    CHECK(count_lines(a) == 1602);  // header + 1601 rows

    CHECK(run_cli("synth --T 1 --noise-std 0 --x0 0.5 --out " + box("b.csv")) == 0);
    const std::vector<double> b = read_scalar_csv(box("b.csv"));
    REQUIRE(b.size() == 2);
    CHECK(b[0] == 0.5);
    CHECK(b[1] == doctest::Approx(0.99 * 0.5 * std::cos(0.05)).epsilon(1e-15));

    CHECK(run_cli("synth --T 1600 --seed 7 --out " + box("a2.csv")) == 0);
    CHECK(slurp(box("a2.csv")) == a);
}

TEST_CASE("estimate fails loudly on rank-deficient input") {
    Sandbox box;
    {
        std::ofstream out(box("const.csv"));
        out << "value\n";
        for (int i = 0; i < 60; ++i) out << "0.5\n";
    }
    const int rc = run_cli("estimate " + box("const.csv") + " --S 2 --N 4 --out " +
                               box("est.txt"),
                           "/dev/null", box("err.txt"));
    CHECK(rc == 2);
    CHECK(slurp(box("err.txt")).find("column 1") != std::string::npos);
}

TEST_CASE("estimate reports the required length on short input") {
    Sandbox box;
    CHECK(run_cli("synth --T 50 --seed 3 --out " + box("s.csv")) == 0);
    const int rc = run_cli("estimate " + box("s.csv") + " --S 4 --N 30 --out " + box("e.txt"),
                           "/dev/null", box("err.txt"));
    CHECK(rc == 1);
    // (S+1)*N = 150 embedded states needed
    CHECK(slurp(box("err.txt")).find("150") != std::string::npos);
}

TEST_CASE("sia estimate at the synthetic-protocol settings") {
    Sandbox box;
    CHECK(run_cli("synth --T 1600 --seed 11 --out " + box("s.csv")) == 0);
    CHECK(run_cli("estimate " + box("s.csv") +
                  " --method sia --gamma 1+1i --S 12 --N 100 --out " + box("sia.txt"),
                  box("log.txt")) == 0);
    const LoadedEstimate sia = load_estimate(box("sia.txt"));
    CHECK(sia.est.method == Method::ShiftInvert);
    CHECK(sia.est.Ktilde.rows() == 12);
    CHECK(sia.est.Ktilde.cols() == 12);
    CHECK(slurp(box("log.txt")).find("cond_L") != std::string::npos);

    // Arnoldi on the same data stays real.
    CHECK(run_cli("estimate " + box("s.csv") + " --method arnoldi --S 12 --N 100 --out " +
                  box("arn.txt")) == 0);
    const LoadedEstimate arn = load_estimate(box("arn.txt"));
    CHECK(arn.est.Ktilde.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("score ranges and sanity") {
    Sandbox box;
    CHECK(run_cli("synth --T 400 --seed 5 --out " + box("s.csv")) == 0);
    CHECK(run_cli("estimate " + box("s.csv") + " --method sia --gamma 1+1i --S 3 --N 20 " +
                  "--out " + box("e.txt")) == 0);

    // Empty range: header-only CSV.
    CHECK(run_cli("score " + box("e.txt") + " " + box("s.csv") +
                  " --score-start 5 --score-end 5 --out " + box("empty.csv")) == 0);
    CHECK(slurp(box("empty.csv")) == "t,score,denominator,flag\n");

    // Training-window scores: median finite and positive.
    CHECK(run_cli("score " + box("e.txt") + " " + box("s.csv") +
                  " --score-start 1 --score-end 80 --out " + box("tr.csv")) == 0);
    AbnormalityTrace trace = read_trace_csv(box("tr.csv"));
    REQUIRE(trace.size() == 79);
    std::vector<double> scores = trace.score;
    std::sort(scores.begin(), scores.end());
    const double median = scores[scores.size() / 2];
    CHECK(std::isfinite(median));
    CHECK(median > 0.0);
}

TEST_CASE("ecg-protocol shape completes quickly") {
    Sandbox box;
    // Quasi-periodic stand-in series long enough for S=10, N=40, p=15.
    {
        std::ofstream out(box("ecg.csv"));
        out << "value\n";
        std::mt19937_64 gen(99);
        for (int t = 0; t < 1200; ++t) {
            const double u = (t % 11) / 11.0;
            const double v = std::exp(-std::pow((u - 0.3) / 0.1, 2)) +
                             0.2 * std::sin(2 * M_PI * u) +
                             0.01 * ((gen() >> 11) * 0x1.0p-53 - 0.5);
            out << format_double(v) << "\n";
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(run_cli("estimate " + box("ecg.csv") +
                  " --method sia --gamma 1.25 --kernel laplacian --S 10 --N 40 -p 15 " +
                  "--out " + box("e.txt")) == 0);
    CHECK(run_cli("score " + box("e.txt") + " " + box("ecg.csv") +
                  " --score-start 430 --out " + box("t.csv")) == 0);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(elapsed < 10.0);
    const AbnormalityTrace trace = read_trace_csv(box("t.csv"));
    CHECK(trace.size() == 1200 - 15 + 1 - 430);
}

TEST_CASE("sweep corner thresholds") {
    Sandbox box;
    {
        std::ofstream out(box("trace.csv"));
        out << "t,score,denominator,flag\n";
        for (int t = 10; t < 40; ++t) {
            const double s = (t == 20 || t == 31) ? 9.0 : 0.1 * (t % 5);
            out << t << "," << format_double(s) << ",1,ok\n";
        }
    }
    {
        std::ofstream out(box("labels.csv"));
        out << "start,end\n19,21\n30,32\n";
    }
    CHECK(run_cli("sweep " + box("trace.csv") + " " + box("labels.csv") + " --out " +
                  box("sw")) == 0);
    const std::string csv = slurp(box("sw.csv"));
    std::istringstream lines(csv);
    std::string line, first_row, last_row;
    std::getline(lines, line);  // header
    CHECK(line == "threshold,accuracy,false_alarm_rate,hits");
    while (std::getline(lines, line)) {
        if (first_row.empty()) first_row = line;
        if (!line.empty()) last_row = line;
    }
    // Below every score: everything flagged. Above every score: nothing.
    CHECK(first_row.find(",1,1,1;1") != std::string::npos);
    CHECK(last_row.find(",0,0,0;0") != std::string::npos);
    CHECK(fs::exists(box("sw.svg")));

    {
        std::ofstream out(box("empty.csv"));
        out << "start,end\n";
    }
    CHECK(run_cli("sweep " + box("trace.csv") + " " + box("empty.csv") + " --out " +
                  box("sw2")) == 1);
}

TEST_CASE("convergence minimal run is deterministic") {
    Sandbox box;
    const std::string args = "convergence --n-series 2 --s-max 3 --t 200 --N 15 --seed 4 "
                             "--out " + box("conv");
    CHECK(run_cli(args) == 0);
    const std::string csv = slurp(box("conv.csv"));
    CHECK(count_lines(csv) == 3);  // header + S=2,3
    CHECK(fs::exists(box("conv.svg")));
    CHECK(run_cli(args) == 0);
    CHECK(slurp(box("conv.csv")) == csv);
}

TEST_CASE("config file seeds defaults and flags win") {
    Sandbox box;
    CHECK(run_cli("synth --T 400 --seed 5 --out " + box("s.csv")) == 0);
    {
        std::ofstream out(box("run.cfg"));
        out << "method = sia\ngamma = 1.25\ns = 4\nn = 15\n";
    }
    CHECK(run_cli("estimate " + box("s.csv") + " --config " + box("run.cfg") + " --S 3 " +
                  "--out " + box("e.txt")) == 0);
    const LoadedEstimate loaded = load_estimate(box("e.txt"));
    CHECK(loaded.est.method == Method::ShiftInvert);  // from config
    CHECK(loaded.est.plan.S == 3);                    // flag wins over config
    CHECK(loaded.est.plan.N == 15);
    CHECK(loaded.est.gamma == Complex{1.25, 0.0});

    CHECK(run_cli("estimate " + box("s.csv") + " --config " + box("missing.cfg")) == 1);
    // gamma without sia is rejected
    CHECK(run_cli("estimate " + box("s.csv") + " --method arnoldi --gamma 1.25 --S 2 --N 10 "
                  "--out " + box("x.txt")) == 1);
}

TEST_CASE("estimate and score outputs are byte-identical across reruns") {
    Sandbox box;
    CHECK(run_cli("synth --T 500 --seed 21 --out " + box("s.csv")) == 0);
    const std::string est_args = "estimate " + box("s.csv") +
                                 " --method sia --gamma 2-0.5i --S 4 --N 25 --out ";
    CHECK(run_cli(est_args + box("e1.txt")) == 0);
    CHECK(run_cli(est_args + box("e2.txt")) == 0);
    CHECK(slurp(box("e1.txt")) == slurp(box("e2.txt")));

    const std::string score_args =
        "score " + box("e1.txt") + " " + box("s.csv") + " --score-start 1 --out ";
    CHECK(run_cli(score_args + box("t1.csv")) == 0);
    CHECK(run_cli(score_args + box("t2.csv")) == 0);
    CHECK(slurp(box("t1.csv")) == slurp(box("t2.csv")));
}
