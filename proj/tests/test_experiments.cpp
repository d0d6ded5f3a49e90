#include "krc/cli.hpp"
#include "krc/config.hpp"
#include "krc/error.hpp"
#include "krc/experiments.hpp"
#include "krc/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace krc;
namespace fs = std::filesystem;

namespace {

std::vector<double> seeded_draws(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(1000);
    for (auto& x : v) x = nd(rng);
    return v;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr)
{
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}

std::size_t count_lines(const fs::path& p)
{
    std::ifstream is(p);
    std::size_t n = 0;
    for (std::string line; std::getline(is, line);) ++n;
    return n;
}

fs::path scratch_dir(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("krc_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_SUITE("experiments-cli") {

TEST_CASE("parallel_map keeps order and isolates failures")
{
    const std::vector<int> none;
    CHECK(parallel_map(none, [](int x) { return x; }, 4).empty());

    const std::vector<int> one{7};
    const auto r1 = parallel_map(one, [](int x) { return 2 * x; }, 4);
    REQUIRE(r1.size() == 1);
    CHECK(*r1[0].value == 14);

    const std::vector<std::uint64_t> seeds(8, 99);
    const auto same = parallel_map(seeds, seeded_draws, 8);
    for (const auto& o : same) {
        REQUIRE(o.ok());
        CHECK(*o.value == *same[0].value);
    }

    std::vector<int> jobs(20);
    for (int i = 0; i < 20; ++i) jobs[i] = i;
    auto fn = [](int x) {
        if (x == 13) throw RangeError("bad job");
        return x * x;
    };
    const auto serial = parallel_map(jobs, fn, 1);
    const auto threaded = parallel_map(jobs, fn, 5);
    for (int i = 0; i < 20; ++i) {
        CHECK(serial[i].ok() == (i != 13));
        CHECK(threaded[i].ok() == (i != 13));
        if (i != 13) CHECK(*threaded[i].value == i * i);
    }
    CHECK(threaded[13].error == "bad job");
}

TEST_CASE("config round trip")
{
    ExperimentConfig c;
    c.model = ModelKind::ES;
    c.n = 77;
    c.mean_degree = 12.0;
    c.lambda_grid = {0.5, 1.5, 2.5};
    c.critical_lambda = true;
    c.ridge = 1e-4;
    c.seeds = {4, 5};
    c.task.kind = TaskKind::Predict;
    c.task.m = 9;
    std::stringstream ss;
    c.to_key_values().write(ss);
    const auto back = ExperimentConfig::from_key_values(KeyValueConfig::parse(ss));
    CHECK(back.to_key_values() == c.to_key_values());
    CHECK(back.critical_lambda);
    CHECK(back.n == 77);

    for (int fig = 1; fig <= 8; ++fig) {
        for (Scale s : {Scale::Desk, Scale::Full}) {
            const auto p = figure_preset(fig, s);
            CHECK_NOTHROW(p.validate());
            const auto rt = ExperimentConfig::from_key_values(p.to_key_values());
            CHECK(rt.to_key_values() == p.to_key_values());
        }
    }
    CHECK_THROWS_AS(figure_preset(9, Scale::Desk), ConfigError);
    CHECK_THROWS_AS(parse_scale("huge"), ConfigError);

    std::istringstream bad("[model]\nn = many\n");
    CHECK_THROWS_AS(ExperimentConfig::from_key_values(KeyValueConfig::parse(bad)), ConfigError);
}

TEST_CASE("row count validation")
{
    std::vector<SweepRow> rows(3);
    std::ostringstream os;
    CHECK_NOTHROW(write_rows_csv(os, rows, 3));
    CHECK(os.str().rfind("model,seed,task,m,axis,value,lambda,ridge,r,r_var,train_mse,test_mse,locked,error", 0) == 0);
    std::ostringstream os2;
    CHECK_THROWS_AS(write_rows_csv(os2, rows, 4), ConfigError);
}

TEST_CASE("mean curves skip failures")
{
    std::vector<SweepRow> rows(4);
    rows[0].value = 1.0;
    rows[0].test_mse = 2.0;
    rows[1].value = 1.0;
    rows[1].test_mse = 4.0;
    rows[2].value = 2.0;
    rows[2].test_mse = 1.0;
    rows[3].value = 2.0;
    rows[3].test_mse = NAN;
    rows[3].error = "boom";
    const auto c = mean_curve(rows, &SweepRow::test_mse);
    REQUIRE(c.x.size() == 2);
    CHECK(c.y[0] == 3.0);
    CHECK(c.y[1] == 1.0);
    CHECK(argmin(c) == 2.0);
}

TEST_CASE("error sweep rows and determinism")
{
    ExperimentConfig c;
    c.n = 30;
    c.lambda_grid = {3.0};
    c.seeds = {1};
    c.split = {150, 200};
    c.relax.t_max = 50.0;
    c.task.m = 2;
    const std::vector<TaskSpec> tasks{c.task};
    const std::vector<double> ridges{1e-8, 1e-2};
    const auto a = error_sweep(c, tasks, ridges);
    const auto b = error_sweep(c, tasks, ridges);
    REQUIRE(a.size() == 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].error.empty());
        CHECK(a[k].test_mse == b[k].test_mse);
        CHECK(a[k].train_mse == b[k].train_mse);
        CHECK(std::isfinite(a[k].test_mse));
    }
    CHECK(a[0].train_mse <= a[1].train_mse);
}

TEST_CASE("run_points is bitwise identical across worker counts")
{
    ExperimentConfig c;
    c.n = 25;
    c.split = {120, 150};
    c.relax.t_max = 30.0;
    std::vector<PointJob> jobs;
    for (std::uint64_t seed : {1, 2}) {
        for (double lambda : {1.0, 3.0}) {
            PointJob j;
            j.cfg = c;
            j.seed = seed;
            j.lambda = lambda;
            j.tasks = {c.task};
            j.ridges = {1e-8};
            j.value = lambda;
            jobs.push_back(j);
        }
    }
    const auto serial = run_points(jobs, 1);
    const auto threaded = run_points(jobs, 4);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        CHECK(serial[k].error.empty());
        CHECK(serial[k].train_mse == threaded[k].train_mse);
        CHECK(serial[k].test_mse == threaded[k].test_mse);
        CHECK(serial[k].r_var == threaded[k].r_var);
    }
}

TEST_CASE("cli exit codes and outputs")
{
    CHECK(run_cli({"--help"}) == kExitOk);
    CHECK(run_cli({"no-such-command"}) == kExitConfig);
    CHECK(run_cli({"sweep-order", "--model", "XX"}) == kExitConfig);
    CHECK(run_cli({"sweep-order", "--config", "/nonexistent/file.cfg"}) == kExitConfig);

    const auto dir = scratch_dir("order");
    std::string text;
    const int code = run_cli({"sweep-order", "--model", "RS", "--n", "20", "--seed", "1", "--out", dir.string(),
                              "--run-id", "o", "--workers", "1"},
                             &text);
    CHECK(code == kExitOk);
    CHECK(count_lines(dir / "o" / "data.csv") == 52);
    CHECK(fs::exists(dir / "o" / "resolved.cfg"));
    CHECK(fs::exists(dir / "o" / "plot.svg"));

    const auto rdir = scratch_dir("run");
    text.clear();
    CHECK(run_cli({"run", "--model", "RS", "--n", "20", "--lambda", "3", "--seed", "2", "--out", rdir.string(),
                   "--run-id", "r"},
                  &text) == kExitOk);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(fs::exists(rdir / "r" / "model.csv"));

    fs::create_directories(rdir);
    const auto bad_cfg = rdir / "bad.cfg";
    std::ofstream(bad_cfg) << "[readout]\ns = -3\n";
    CHECK(run_cli({"run", "--config", bad_cfg.string(), "--out", rdir.string()}) == kExitConfig);

    fs::remove_all(dir);
    fs::remove_all(rdir);
}

}
