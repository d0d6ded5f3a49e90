// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   krc_acceptance [criteria...] [--workers N] [--out DIR]
//
// With no criteria listed all ten run. Exit status is 0 only if every selected
// criterion passes.

#include "krc/config.hpp"
#include "krc/experiments.hpp"
#include "krc/order_params.hpp"
#include "krc/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace krc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::vector<std::uint64_t> seed_range(std::uint64_t lo, std::uint64_t hi)
{
    std::vector<std::uint64_t> s;
    for (auto k = lo; k <= hi; ++k) s.push_back(k);
    return s;
}

ExperimentConfig full_config(ModelKind m)
{
    ExperimentConfig c;
    c.model = m;
    c.n = 500;
    c.mean_degree = 6.0;
    c.lambda_grid = make_grid(0.0, 5.0, 0.1);
    return c;
}

ExperimentConfig desk_config(ModelKind m)
{
    ExperimentConfig c;
    c.model = m;
    c.n = 200;
    c.mean_degree = 6.0;
    c.split = {800, 1000};
    return c;
}

TaskSpec filter_task(int m)
{
    TaskSpec t;
    t.kind = TaskKind::Filter;
    t.m = m;
    return t;
}

TaskSpec predict_task(int m)
{
    TaskSpec t;
    t.kind = TaskKind::Predict;
    t.m = m;
    return t;
}

std::vector<double> field(std::span<const OrderParamSample> s, double OrderParamSample::*f)
{
    std::vector<double> v;
    for (const auto& x : s) v.push_back(x.*f);
    return v;
}

std::vector<OrderParamSample> by_direction(std::span<const OrderParamSample> s, SweepDirection d)
{
    std::vector<OrderParamSample> out;
    for (const auto& x : s)
        if (x.direction == d) out.push_back(x);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    return out;
}

// Largest upward single-step change of values within [lo, hi].
Jump largest_rise_within(std::span<const double> lambdas, std::span<const double> values, double lo, double hi)
{
    Jump best;
    for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
        if (lambdas[k] < lo - 1e-9 || lambdas[k + 1] > hi + 1e-9) continue;
        const double d = values[k + 1] - values[k];
        if (d > best.delta) best = {lambdas[k], lambdas[k + 1], d};
    }
    return best;
}

class Acceptance {
public:
    Acceptance(unsigned workers, std::optional<std::filesystem::path> out) : workers_(workers), out_(std::move(out))
    {
        if (out_) std::filesystem::create_directories(*out_);
    }

    Verdict c1();
    Verdict c2();
    Verdict c3();
    Verdict c4();
    Verdict c5();
    Verdict c6();
    Verdict c7();
    Verdict c8();
    Verdict c9();
    Verdict c10();

private:
    using Sweeps = std::vector<std::vector<OrderParamSample>>;

    const Sweeps& rs_full();
    const Sweeps& es_full();
    const std::map<std::pair<ModelKind, std::uint64_t>, double>& desk_critical();
    const std::vector<SweepRow>& error_rows();
    const std::vector<SweepRow>& degree_rows();

    Sweeps run_sweeps(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds, bool backward,
                      double* max_seconds = nullptr);
    void dump_rows(const std::string& name, std::span<const SweepRow> rows) const;
    void dump_sweeps(const std::string& name, ModelKind m, const Sweeps& s, const std::vector<std::uint64_t>& seeds) const;

    // Test MSE for (model, seed, task, m, ridge) as a lambda-ordered curve.
    std::vector<std::pair<double, double>> curve(std::span<const SweepRow> rows, ModelKind m, std::uint64_t seed,
                                                 TaskKind task, int len, double ridge,
                                                 double SweepRow::*f = &SweepRow::test_mse) const;

    unsigned workers_;
    std::optional<std::filesystem::path> out_;
    std::optional<Sweeps> rs_full_, es_full_;
    double rs_full_seconds_ = 0.0;
    std::optional<std::map<std::pair<ModelKind, std::uint64_t>, double>> desk_crit_;
    std::optional<std::vector<SweepRow>> error_rows_, degree_rows_;

    const std::vector<std::uint64_t> three_ = seed_range(1, 3);
    const std::vector<std::uint64_t> ten_ = seed_range(1, 10);
    const std::vector<double> desk_grid_ = make_grid(1.0, 5.0, 0.25);
    const std::vector<double> degree_grid_ = make_grid(2.0, 5.0, 0.25);
    const std::vector<double> degrees_{3, 6, 12, 24, 48, 96};
};

Acceptance::Sweeps Acceptance::run_sweeps(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                          bool backward, double* max_seconds)
{
    const auto res = parallel_map(
        seeds,
        [&](std::uint64_t seed) {
            const auto t0 = Clock::now();
            auto s = order_sweeps(cfg, seed, backward);
            return std::make_pair(std::move(s), seconds_since(t0));
        },
        workers_);
    Sweeps out;
    for (const auto& r : res) {
        if (!r.ok()) throw std::runtime_error("order sweep failed: " + r.error);
        out.push_back(r.value->first);
        if (max_seconds) *max_seconds = std::max(*max_seconds, r.value->second);
    }
    return out;
}

void Acceptance::dump_rows(const std::string& name, std::span<const SweepRow> rows) const
{
    if (!out_) return;
    std::ofstream os(*out_ / name);
    write_rows_csv(os, rows);
}

void Acceptance::dump_sweeps(const std::string& name, ModelKind m, const Sweeps& s,
                             const std::vector<std::uint64_t>& seeds) const
{
    if (!out_) return;
    std::ofstream os(*out_ / name);
    for (std::size_t k = 0; k < s.size(); ++k) write_order_csv(os, s[k], m, seeds[k], k == 0);
}

const Acceptance::Sweeps& Acceptance::rs_full()
{
    if (!rs_full_) {
        rs_full_ = run_sweeps(full_config(ModelKind::RS), three_, false, &rs_full_seconds_);
        dump_sweeps("order_rs_n500.csv", ModelKind::RS, *rs_full_, three_);
    }
    return *rs_full_;
}

const Acceptance::Sweeps& Acceptance::es_full()
{
    if (!es_full_) {
        es_full_ = run_sweeps(full_config(ModelKind::ES), ten_, true);
        dump_sweeps("order_es_n500.csv", ModelKind::ES, *es_full_, ten_);
    }
    return *es_full_;
}

// Critical coupling per desk-scale model and seed: midpoint of the largest
// r_var jump of a forward order sweep from random phases.
const std::map<std::pair<ModelKind, std::uint64_t>, double>& Acceptance::desk_critical()
{
    if (!desk_crit_) {
        desk_crit_.emplace();
        for (ModelKind m : {ModelKind::RS, ModelKind::ES}) {
            ExperimentConfig c = desk_config(m);
            c.lambda_grid = make_grid(0.0, 6.0, 0.1);
            const auto sweeps = run_sweeps(c, three_, false);
            dump_sweeps(std::string("order_desk_") + (m == ModelKind::RS ? "rs" : "es") + ".csv", m, sweeps, three_);
            for (std::size_t k = 0; k < three_.size(); ++k) {
                const auto mid = detect_critical(sweeps[k]);
                (*desk_crit_)[{m, three_[k]}] = mid.value_or(NAN);
            }
        }
    }
    return *desk_crit_;
}

// Shared desk-scale error data: both models, ten seeds, Task 1 with m = 5 and
// 15, Task 2 with m = 5. The three desk seeds also get the ridge-0 fit.
const std::vector<SweepRow>& Acceptance::error_rows()
{
    if (!error_rows_) {
        std::vector<PointJob> jobs;
        for (ModelKind m : {ModelKind::RS, ModelKind::ES}) {
            for (auto seed : ten_) {
                for (double lambda : desk_grid_) {
                    PointJob j;
                    j.cfg = desk_config(m);
                    j.seed = seed;
                    j.lambda = lambda;
                    j.value = lambda;
                    j.tasks = {filter_task(5), filter_task(15), predict_task(5)};
                    j.ridges = seed <= 3 ? std::vector<double>{1e-8, 0.0} : std::vector<double>{1e-8};
                    jobs.push_back(std::move(j));
                }
            }
        }
        error_rows_ = run_points(jobs, workers_);
        dump_rows("error_desk.csv", *error_rows_);
    }
    return *error_rows_;
}

const std::vector<SweepRow>& Acceptance::degree_rows()
{
    if (!degree_rows_) {
        std::vector<PointJob> jobs;
        for (double k : degrees_) {
            for (auto seed : three_) {
                for (double lambda : degree_grid_) {
                    PointJob j;
                    j.cfg = desk_config(ModelKind::ES);
                    j.cfg.mean_degree = k;
                    j.seed = seed;
                    j.lambda = lambda;
                    j.axis = "mean_degree";
                    j.value = k;
                    j.tasks = {filter_task(5)};
                    j.ridges = {1e-8};
                    jobs.push_back(std::move(j));
                }
            }
        }
        degree_rows_ = run_points(jobs, workers_);
        dump_rows("degree_desk.csv", *degree_rows_);
    }
    return *degree_rows_;
}

std::vector<std::pair<double, double>> Acceptance::curve(std::span<const SweepRow> rows, ModelKind m,
                                                         std::uint64_t seed, TaskKind task, int len, double ridge,
                                                         double SweepRow::*f) const
{
    std::vector<std::pair<double, double>> c;
    for (const auto& r : rows) {
        if (r.model == m && r.seed == seed && r.task == task && r.m == len && r.ridge == ridge && r.error.empty())
            c.emplace_back(r.lambda, r.*f);
    }
    std::sort(c.begin(), c.end());
    return c;
}

double min_value(const std::vector<std::pair<double, double>>& c)
{
    double best = INFINITY;
    for (const auto& p : c)
        if (std::isfinite(p.second)) best = std::min(best, p.second);
    return best;
}

Verdict Acceptance::c1()
{
    const auto& s = rs_full();
    const double oracle = 2.0 * std::sqrt(2.0 / std::numbers::pi);
    const auto& grid = s.front();
    double onset = NAN;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mean = 0.0;
        for (const auto& sw : s) mean += sw[i].r / static_cast<double>(s.size());
        if (mean > 0.3) {
            onset = grid[i].lambda;
            break;
        }
    }
    const bool brackets = oracle >= 1.3 && oracle <= 2.0 && 1.6 >= 1.3 && 1.6 <= 2.0;
    const bool pass = onset >= 1.3 && onset <= 2.0 && brackets && rs_full_seconds_ <= 600.0;
    return {pass, "seed-mean r first exceeds 0.3 at lambda=" + fmt(onset) + " (window 1.3..2.0, mean-field " +
                      fmt(oracle, 4) + "); slowest sweep " + fmt(rs_full_seconds_) + " s (limit 600)"};
}

Verdict Acceptance::c2()
{
    const auto& s = es_full();
    int ok = 0;
    std::string per;
    for (const auto& sw : s) {
        const auto f = by_direction(sw, SweepDirection::Forward);
        const auto lam = field(f, &OrderParamSample::lambda);
        const Jump j = largest_rise_within(lam, field(f, &OrderParamSample::r), 2.0, 4.0);
        ok += j.delta >= 0.4;
        per += " " + fmt(j.delta, 2) + "@" + fmt(j.midpoint(), 3);
    }
    return {ok >= 8, std::to_string(ok) + "/10 seeds with a forward step dr >= 0.4 in 2..4; largest:" + per};
}

Verdict Acceptance::c3()
{
    const auto& s = rs_full();
    int ok = 0;
    std::string per;
    for (const auto& sw : s) {
        const auto lam = field(sw, &OrderParamSample::lambda);
        const auto r = field(sw, &OrderParamSample::r);
        const Jump jv = largest_rise_within(lam, field(sw, &OrderParamSample::r_var), 2.2, 3.8);
        double max_dr = 0.0;
        for (std::size_t k = 0; k + 1 < lam.size(); ++k)
            if (lam[k + 1] <= 2.5 + 1e-9) max_dr = std::max(max_dr, std::abs(r[k + 1] - r[k]));
        ok += jv.delta >= 0.4 && max_dr < 0.2;
        per += " [dr_var " + fmt(jv.delta, 2) + "@" + fmt(jv.midpoint()) + ", max dr below 2.5 " + fmt(max_dr, 2) + "]";
    }
    return {2 * ok > static_cast<int>(s.size()), std::to_string(ok) + "/3 seeds;" + per};
}

Verdict Acceptance::c4()
{
    const auto& s = es_full();
    int ok = 0;
    std::string per;
    for (const auto& sw : s) {
        const auto f = by_direction(sw, SweepDirection::Forward);
        const auto b = by_direction(sw, SweepDirection::Backward);
        const Jump jf = largest_jump(field(f, &OrderParamSample::lambda), field(f, &OrderParamSample::r));
        const Jump jb = largest_jump(field(b, &OrderParamSample::lambda), field(b, &OrderParamSample::r));
        ok += jb.midpoint() < jf.midpoint();
        per += " " + fmt(jf.midpoint()) + "/" + fmt(jb.midpoint());
    }
    return {ok >= 6, std::to_string(ok) + "/10 seeds desynchronize below the forward jump; forward/backward:" + per};
}

Verdict Acceptance::c5()
{
    const auto& rows = error_rows();
    const auto& crit = desk_critical();
    std::map<double, double> mean;
    double lc = 0.0;
    for (auto seed : three_) {
        for (const auto& [lam, v] : curve(rows, ModelKind::RS, seed, TaskKind::Filter, 5, 1e-8))
            mean[lam] += v / 3.0;
        lc += crit.at({ModelKind::RS, seed}) / 3.0;
    }
    double best = NAN, best_v = INFINITY;
    for (const auto& [lam, v] : mean)
        if (v < best_v) best_v = v, best = lam;
    return {std::abs(best - lc) <= 0.5,
            "RS Task 1 m=5 seed-mean test MSE minimal at lambda=" + fmt(best) + " (" + fmt(best_v) +
                "); r_var critical " + fmt(lc)};
}

Verdict Acceptance::c6()
{
    const auto& rows = error_rows();
    std::string detail;
    bool pass = true;
    for (auto [task, name] : {std::pair{TaskKind::Filter, "task1"}, std::pair{TaskKind::Predict, "task2"}}) {
        int ok = 0;
        double ratio_sum = 0.0;
        for (auto seed : ten_) {
            const double rs = min_value(curve(rows, ModelKind::RS, seed, task, 5, 1e-8));
            const double es = min_value(curve(rows, ModelKind::ES, seed, task, 5, 1e-8));
            ok += es <= rs;
            ratio_sum += std::log10(rs / es) / 10.0;
        }
        pass = pass && ok >= 8;
        detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(ok) +
                  "/10 (mean log10 RS/ES " + fmt(ratio_sum, 2) + ")";
    }
    return {pass, detail};
}

Verdict Acceptance::c7()
{
    const auto& rows = error_rows();
    int ok = 0;
    std::string per;
    for (auto seed : ten_) {
        auto ratio = [&](ModelKind m) {
            return min_value(curve(rows, m, seed, TaskKind::Filter, 15, 1e-8)) /
                   min_value(curve(rows, m, seed, TaskKind::Filter, 5, 1e-8));
        };
        const double rs = ratio(ModelKind::RS), es = ratio(ModelKind::ES);
        ok += rs > es;
        per += " " + fmt(rs, 2) + "/" + fmt(es, 2);
    }
    return {ok >= 6, std::to_string(ok) + "/10 seeds with RS ratio > ES ratio; RS/ES:" + per};
}

Verdict Acceptance::c8()
{
    const auto& rows = degree_rows();
    std::vector<double> err;
    std::string per;
    for (double k : degrees_) {
        std::map<double, double> mean;
        for (const auto& r : rows)
            if (r.value == k && r.error.empty()) mean[r.lambda] += r.test_mse / 3.0;
        double best = INFINITY;
        for (const auto& [lam, v] : mean) best = std::min(best, v);
        err.push_back(best);
        per += " k=" + fmt(k) + ":" + fmt(best);
    }
    const auto it = std::min_element(err.begin(), err.end());
    const double kmin = degrees_[static_cast<std::size_t>(it - err.begin())];
    const bool pass = kmin >= 6 && kmin <= 24 && err.front() > *it && err.back() > *it;
    return {pass, "minimum at k=" + fmt(kmin) + ";" + per};
}

Verdict Acceptance::c9()
{
    const auto& rows = error_rows();
    const auto& crit = desk_critical();
    std::string detail;
    bool pass = true;
    for (auto [m, want_rise] : {std::pair{ModelKind::RS, false}, std::pair{ModelKind::ES, true}}) {
        int ok = 0;
        std::string per;
        for (auto seed : three_) {
            const auto c = curve(rows, m, seed, TaskKind::Filter, 5, 0.0, &SweepRow::train_mse);
            std::vector<double> lam, lg;
            for (const auto& [l, v] : c) {
                lam.push_back(l);
                lg.push_back(std::log10(std::max(v, 1e-300)));
            }
            const Jump j = largest_jump(lam, lg);
            const double lc = crit.at({m, seed});
            const bool dir = want_rise ? j.delta > 0 : j.delta < 0;
            ok += dir && std::abs(j.midpoint() - lc) <= 0.5;
            per += " " + fmt(j.delta, 2) + "@" + fmt(j.midpoint()) + " vs " + fmt(lc);
        }
        pass = pass && 2 * ok > 3;
        detail += std::string(detail.empty() ? "" : "; ") + to_string(m) + " " + std::to_string(ok) +
                  "/3 (dlog10 train@lambda vs critical:" + per + ")";
    }
    return {pass, detail};
}

Verdict Acceptance::c10()
{
    const std::string filter =
        "two-oscillator lock threshold*,Integrator matches naive RK4*,kuramoto r*,variance order parameter,"
        "small RS sweep*,solver matches the brute-force*,task 1 hand examples,task 1 matches*,task 2 shifts,"
        "parallel_map*,run_points is bitwise*";
    const std::string cmd = std::string("\"") + KRC_TESTS_BIN + "\" --minimal \"--test-case=" + filter + "\"";
    const auto t0 = Clock::now();
    const int rc = std::system(cmd.c_str());
    const double secs = seconds_since(t0);
    return {rc == 0 && secs < 60.0, "property cases exit " + std::to_string(rc) + " in " + fmt(secs) + " s"};
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> selected;
    unsigned workers = 0;
    std::optional<std::filesystem::path> out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--workers" && i + 1 < argc) {
            workers = static_cast<unsigned>(std::stoul(argv[++i]));
        } else if (a == "--out" && i + 1 < argc) {
            out = argv[++i];
        } else {
            const int c = std::atoi(a.c_str());
            if (c < 1 || c > 10) {
                std::cerr << "usage: krc_acceptance [1..10 ...] [--workers N] [--out DIR]\n";
                return 2;
            }
            selected.insert(c);
        }
    }
    if (selected.empty())
        for (int c = 1; c <= 10; ++c) selected.insert(c);

    Acceptance acc(workers, out);
    const std::vector<std::function<Verdict()>> checks{
        [&] { return acc.c1(); }, [&] { return acc.c2(); }, [&] { return acc.c3(); }, [&] { return acc.c4(); },
        [&] { return acc.c5(); }, [&] { return acc.c6(); }, [&] { return acc.c7(); }, [&] { return acc.c8(); },
        [&] { return acc.c9(); }, [&] { return acc.c10(); }};

    bool all = true;
    for (int c : selected) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = checks[static_cast<std::size_t>(c - 1)]();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        all = all && v.pass;
        std::cout << "criterion " << c << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << " ["
                  << fmt(seconds_since(t0), 4) << " s]" << std::endl;
    }
    return all ? 0 : 1;
}
