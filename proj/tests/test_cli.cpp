#include <doctest.h>

#include <spstorm/ingest.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace spstorm;

#ifndef SPSTORM_BENCH_PATH
#error "SPSTORM_BENCH_PATH must name the spstorm-bench binary"
#endif

namespace {

const fs::path kRoot = fs::temp_directory_path() / "spstorm_cli_test";

int bench(const std::string& args)
{
    const std::string cmd = std::string(SPSTORM_BENCH_PATH) + " " + args + " >" + (kRoot / "last.log").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

// 200 x 20 synthetic LIBSVM file, written once per process.
fs::path dataset()
{
    static const fs::path path = [] {
        fs::remove_all(kRoot);
        fs::create_directories(kRoot);
        SyntheticSpec spec;
        spec.num_samples = 200;
        spec.num_features = 20;
        spec.num_groups = 5;
        const auto p = kRoot / "tiny.svm";
        std::ofstream out(p);
        write_libsvm(out, make_synthetic(spec));
        return p;
    }();
    return path;
}

fs::path prepared(const std::string& name, const std::string& extra = "")
{
    const auto dir = kRoot / name;
    fs::remove_all(dir);
    REQUIRE(bench("prepare --dataset " + q(dataset()) + " --out " + q(dir) + " " + extra) == 0);
    return dir;
}

const std::string kRunFlags = " --epochs 40 --batch 16 --seed 1 --seed 2 --diag-period 5 --threads 2";

}  // namespace

TEST_CASE("full pipeline on a small instance")
{
    const auto start = std::chrono::steady_clock::now();
    const auto dir = prepared("pipeline", "--ratio 0.25");
    CHECK(fs::exists(dir / "instance.manifest"));
    CHECK(fs::exists(dir / "data.svm"));
    REQUIRE(bench("reference --bundle " + q(dir)) == 0);
    const auto ref = nlohmann::json::parse(slurp(dir / "reference.json"));
    CHECK(ref["converged"] == true);
    CHECK(ref["chi"].get<double>() <= 1e-8);

    REQUIRE(bench("run --bundle " + q(dir) + kRunFlags) == 0);
    for (const char* m : {"spstorm", "pstorm", "proxsvrg", "saga", "rda"})
        for (int s : {1, 2}) {
            const std::string stem = std::string(m) + "_seed" + std::to_string(s);
            CHECK(fs::exists(dir / "traces" / (stem + ".csv")));
            CHECK(fs::exists(dir / "traces" / (stem + ".json")));
        }
    REQUIRE(bench("report --bundle " + q(dir) + " --out " + q(dir / "report")) == 0);
    const auto metrics = nlohmann::json::parse(slurp(dir / "report" / "metrics.json"));
    CHECK(metrics["methods"].size() == 5);
    CHECK(metrics.contains("scores"));
    for (const char* f : {"plot_dist.csv", "plot_eps.csv", "plot_support.csv"})
        CHECK(fs::exists(dir / "report" / f));
    CHECK(slurp(dir / "report" / "plot_dist.csv").find("sqrt_log_k_over_k") != std::string::npos);

    // a second run into a fresh directory reproduces every trace byte for byte
    REQUIRE(bench("run --bundle " + q(dir) + " --traces " + q(dir / "again") + kRunFlags) == 0);
    for (const auto& e : fs::directory_iterator(dir / "traces"))
        CHECK(slurp(e.path()) == slurp(dir / "again" / e.path().filename()));

    CHECK(std::chrono::steady_clock::now() - start < std::chrono::minutes(1));
}

TEST_CASE("report refuses traces from different configurations")
{
    const auto dir = prepared("mixed");
    REQUIRE(bench("run --bundle " + q(dir) + " --method spstorm --epochs 5 --batch 16") == 0);
    REQUIRE(bench("run --bundle " + q(dir) + " --method saga --epochs 6 --batch 16") == 0);
    CHECK(bench("report --bundle " + q(dir)) == 2);
    CHECK_FALSE(fs::exists(dir / "traces" / "metrics.json"));
}

TEST_CASE("report without a reference omits distance plots")
{
    const auto dir = prepared("noref");
    REQUIRE(bench("run --bundle " + q(dir) + " --method spstorm --method rda --epochs 5 --batch 16") == 0);
    REQUIRE(bench("report --bundle " + q(dir)) == 0);
    CHECK(fs::exists(dir / "traces" / "metrics.json"));
    CHECK_FALSE(fs::exists(dir / "traces" / "plot_dist.csv"));
}

TEST_CASE("exit codes")
{
    const auto empty = kRoot / "empty";
    fs::create_directories(empty);
    CHECK(bench("") == 1);
    CHECK(bench("run --bundle") == 1);
    CHECK(bench("frobnicate") == 1);
    CHECK(bench("prepare --dataset " + q(dataset()) + " --out " + q(kRoot / "bad_ratio") + " --ratio 0.3") == 1);
    CHECK(bench("prepare --dataset " + q(dataset()) + " --out " + q(kRoot / "free_ratio") +
                " --ratio 0.3 --ratio-free") == 0);
    CHECK(bench("run --bundle " + q(empty)) == 2);
    CHECK(bench("reference --bundle " + q(empty)) == 2);
    CHECK(bench("report --bundle " + q(empty)) == 2);
    CHECK(bench("prepare --dataset " + q(empty / "missing.svm") + " --out " + q(kRoot / "nowhere")) == 2);

    const auto dir = prepared("budget");
    CHECK(bench("run --bundle " + q(dir) + " --method saga --epochs 5 --memory-budget 64") == 3);
    const auto side = nlohmann::json::parse(slurp(dir / "traces" / "saga_seed1.json"));
    CHECK(side["failed"] == true);
    CHECK(side["termination"] == "memory");
    CHECK(bench("reference --bundle " + q(dir) + " --max-iter 2") == 3);
}

TEST_CASE("config file supplies run options and flags override it")
{
    const auto dir = prepared("config");
    const auto cfg = kRoot / "run.cfg";
    std::ofstream(cfg) << "[run]\nmethod=rda\nepochs=3\nbatch=16\nseed=4\n";
    REQUIRE(bench("--config " + q(cfg) + " run --bundle " + q(dir) + " --epochs 2") == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir / "traces")) {
        (void)e;
        ++files;
    }
    CHECK(files == 2);
    std::ifstream in(dir / "traces" / "rda_seed4.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 + 2);  // comment, header, two epochs
}

TEST_CASE("weights above the threshold give an empty optimal support")
{
    const auto dir = prepared("above", "--lambda-factor 1.01");
    REQUIRE(bench("reference --bundle " + q(dir)) == 0);
    const auto ref = nlohmann::json::parse(slurp(dir / "reference.json"));
    CHECK(ref["support"].empty());
    for (const auto& v : ref["x_star"]) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("selftest passes")
{
    dataset();
    CHECK(bench("selftest") == 0);
}
