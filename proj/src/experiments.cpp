#include "krc/experiments.hpp"

#include "krc/error.hpp"
#include "krc/parallel.hpp"
#include "krc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace krc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tasks whose inputs coincide can share one simulation.
bool same_input(const TaskSpec& a, const TaskSpec& b)
{
    if (a.kind != b.kind || a.seed != b.seed) {
        return false;
    }
    return a.kind != TaskKind::MultiSineFilter || a.m == b.m;
}

bool per_task_axis(const std::string& axis)
{
    return axis == "m" || axis == "modes";
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

double log10_or_nan(double v)
{
    return v > 0.0 ? std::log10(v) : kNaN;
}

std::vector<OrderParamSample> as_samples(const Curve& rvar)
{
    std::vector<OrderParamSample> s;
    for (std::size_t k = 0; k < rvar.x.size(); ++k) {
        OrderParamSample p;
        p.lambda = rvar.x[k];
        p.r_var = rvar.y[k];
        s.push_back(p);
    }
    return s;
}

Curve filter_rows(std::span<const SweepRow> rows, double SweepRow::*field, ModelKind model, TaskKind task, int m)
{
    std::vector<SweepRow> sel;
    for (const auto& r : rows) {
        if (r.model == model && r.task == task && r.m == m) {
            sel.push_back(r);
        }
    }
    return mean_curve(sel, field);
}

Curve log_curve(Curve c)
{
    for (auto& y : c.y) {
        y = log10_or_nan(y);
    }
    return c;
}

std::string check_line(bool ok, const std::string& what)
{
    return std::string(ok ? "PASS " : "FAIL ") + what;
}

} // namespace

std::vector<OrderParamSample> order_sweeps(const ExperimentConfig& cfg, std::uint64_t seed, bool backward)
{
    const SeededSetup setup = make_setup(cfg, seed);
    const ReservoirSpec spec = make_reservoir_spec(cfg, setup, cfg.lambda_grid.front(), seed);
    const KuramotoSystem sys(setup.net, setup.omega, spec.coupling);
    OscillatorState init = make_state(sys, random_phases(cfg.n, spec.seed));

    SweepProtocol protocol = cfg.sweep;
    protocol.dt = cfg.relax.dt;
    protocol.variance.sample_dt = cfg.sample_dt;
    SweepOutcome fwd = sweep(setup.net, setup.omega, setup.variant, cfg.lambda_grid, SweepDirection::Forward,
                             std::move(init), protocol);
    std::vector<OrderParamSample> out = std::move(fwd.samples);
    if (backward) {
        SweepOutcome bwd = sweep(setup.net, setup.omega, setup.variant, cfg.lambda_grid, SweepDirection::Backward,
                                 std::move(fwd.final_state), protocol);
        out.insert(out.end(), bwd.samples.begin(), bwd.samples.end());
    }
    return out;
}

std::optional<double> critical_grid_point(std::span<const OrderParamSample> samples)
{
    const auto mid = detect_critical(samples);
    if (!mid) {
        return std::nullopt;
    }
    std::optional<double> best;
    for (const auto& s : samples) {
        if (s.lambda >= *mid && (!best || s.lambda < *best)) {
            best = s.lambda;
        }
    }
    return best;
}

std::optional<double> critical_lambda(const ExperimentConfig& cfg, std::uint64_t seed)
{
    const auto samples = order_sweeps(cfg, seed, false);
    return critical_grid_point(samples);
}

std::vector<SweepRow> run_point(const PointJob& job)
{
    if (job.tasks.empty() || job.ridges.empty()) {
        throw ConfigError("a point job needs at least one task and one ridge value");
    }
    const SeededSetup setup = make_setup(job.cfg, job.seed);
    double lambda = job.lambda;
    if (job.cfg.critical_lambda) {
        const auto c = critical_lambda(job.cfg, job.seed);
        if (!c) {
            throw std::runtime_error("no transition detected in the order sweep");
        }
        lambda = *c;
    }
    const ReservoirSpec spec = make_reservoir_spec(job.cfg, setup, lambda, job.seed);

    std::vector<TaskSpec> tasks;
    for (const auto& t : job.tasks) {
        tasks.push_back(seeded_task(t, job.seed));
        tasks.back().validate();
    }
    const std::size_t nr = job.ridges.size();
    std::vector<SweepRow> rows(tasks.size() * nr);
    std::vector<bool> done(tasks.size(), false);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (done[k]) {
            continue;
        }
        std::vector<std::size_t> group;
        std::vector<TaskSpec> group_tasks;
        for (std::size_t j = k; j < tasks.size(); ++j) {
            if (!done[j] && same_input(tasks[k], tasks[j])) {
                group.push_back(j);
                group_tasks.push_back(tasks[j]);
                done[j] = true;
            }
        }
        auto input = std::make_shared<const TimeSeries>(experiment_input(tasks[k], spec.split, spec.relax.dt));
        const ReservoirRun run = run_reservoir(spec, input);
        for (std::size_t q = 0; q < nr; ++q) {
            const auto reports = fit_tasks(run, spec, group_tasks, job.ridges[q]);
            for (std::size_t g = 0; g < group.size(); ++g) {
                const TaskSpec& t = tasks[group[g]];
                SweepRow& row = rows[group[g] * nr + q];
                row.model = job.cfg.model;
                row.seed = job.seed;
                row.task = t.kind;
                row.m = t.m;
                row.axis = job.axis;
                row.value = per_task_axis(job.axis) ? t.m : job.value;
                row.lambda = lambda;
                row.ridge = job.ridges[q];
                row.r = reports[g].r;
                row.r_var = reports[g].r_var;
                row.train_mse = reports[g].train_mse;
                row.test_mse = reports[g].test_mse;
                row.locked = reports[g].locked;
            }
        }
    }
    return rows;
}

std::vector<SweepRow> run_points(const std::vector<PointJob>& jobs, unsigned workers)
{
    const auto outcomes = parallel_map(jobs, run_point, workers);
    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (outcomes[k].ok()) {
            rows.insert(rows.end(), outcomes[k].value->begin(), outcomes[k].value->end());
            continue;
        }
        const PointJob& job = jobs[k];
        for (const auto& t : job.tasks) {
            for (double ridge : job.ridges) {
                SweepRow row;
                row.model = job.cfg.model;
                row.seed = job.seed;
                row.task = t.kind;
                row.m = t.m;
                row.axis = job.axis;
                row.value = per_task_axis(job.axis) ? t.m : job.value;
                row.lambda = job.cfg.critical_lambda ? kNaN : job.lambda;
                row.ridge = ridge;
                row.r = row.r_var = row.train_mse = row.test_mse = kNaN;
                row.error = outcomes[k].error;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<SweepRow> error_sweep(const ExperimentConfig& cfg, std::span<const TaskSpec> tasks,
                                  std::span<const double> ridges)
{
    cfg.validate();
    std::vector<PointJob> jobs;
    for (auto seed : cfg.seeds) {
        for (double lambda : cfg.lambda_grid) {
            PointJob j;
            j.cfg = cfg;
            j.cfg.critical_lambda = false;
            j.seed = seed;
            j.lambda = lambda;
            j.tasks.assign(tasks.begin(), tasks.end());
            j.ridges.assign(ridges.begin(), ridges.end());
            j.axis = "lambda";
            j.value = lambda;
            jobs.push_back(std::move(j));
        }
    }
    return run_points(jobs, cfg.workers);
}

std::vector<SweepRow> task_length_sweep(const ExperimentConfig& cfg, std::span<const int> lengths, double lambda)
{
    cfg.validate();
    std::vector<PointJob> jobs;
    for (auto seed : cfg.seeds) {
        PointJob j;
        j.cfg = cfg;
        j.seed = seed;
        j.lambda = lambda;
        for (int m : lengths) {
            TaskSpec t = cfg.task;
            t.m = m;
            j.tasks.push_back(t);
        }
        j.ridges = {cfg.ridge};
        j.axis = "m";
        jobs.push_back(std::move(j));
    }
    return run_points(jobs, cfg.workers);
}

std::vector<SweepRow> modes_sweep(const ExperimentConfig& cfg, std::span<const int> modes, double lambda)
{
    cfg.validate();
    std::vector<PointJob> jobs;
    for (auto seed : cfg.seeds) {
        for (int m : modes) {
            PointJob j;
            j.cfg = cfg;
            j.seed = seed;
            j.lambda = lambda;
            TaskSpec t = cfg.task;
            t.kind = TaskKind::MultiSineFilter;
            t.m = m;
            j.tasks = {t};
            j.ridges = {cfg.ridge};
            j.axis = "modes";
            jobs.push_back(std::move(j));
        }
    }
    return run_points(jobs, cfg.workers);
}

std::vector<SweepRow> degree_sweep(const ExperimentConfig& cfg, std::span<const double> degrees, double lambda)
{
    cfg.validate();
    std::vector<PointJob> jobs;
    for (auto seed : cfg.seeds) {
        for (double k : degrees) {
            PointJob j;
            j.cfg = cfg;
            j.cfg.mean_degree = k;
            j.cfg.validate();
            j.seed = seed;
            j.lambda = lambda;
            j.tasks = {cfg.task};
            j.ridges = {cfg.ridge};
            j.axis = "mean_degree";
            j.value = k;
            jobs.push_back(std::move(j));
        }
    }
    return run_points(jobs, cfg.workers);
}

void write_rows_csv(std::ostream& os, std::span<const SweepRow> rows, std::size_t expected_rows)
{
    if (expected_rows != 0 && rows.size() != expected_rows) {
        std::ostringstream msg;
        msg << "sweep produced " << rows.size() << " rows, expected " << expected_rows;
        throw ConfigError(msg.str());
    }
    for (const auto& r : rows) {
        if (r.axis.empty() || r.axis.find(',') != std::string::npos) {
            throw ConfigError("malformed sweep axis name");
        }
    }
    const auto prec = os.precision(10);
    os << "model,seed,task,m,axis,value,lambda,ridge,r,r_var,train_mse,test_mse,locked,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << to_string(r.model) << ',' << r.seed << ',' << to_string(r.task) << ',' << r.m << ',' << r.axis << ','
           << r.value << ',' << r.lambda << ',' << r.ridge << ',' << r.r << ',' << r.r_var << ',' << r.train_mse
           << ',' << r.test_mse << ',' << (r.locked ? 1 : 0) << ',' << err << '\n';
    }
    os.precision(prec);
}

void write_order_csv(std::ostream& os, std::span<const OrderParamSample> samples, ModelKind model,
                     std::uint64_t seed, bool header)
{
    if (header) {
        os << "model,direction,lambda,r,r_var,seed\n";
    }
    for (const auto& s : samples) {
        os << to_string(model) << ',' << to_string(s.direction) << ',' << s.lambda << ',' << s.r << ',' << s.r_var
           << ',' << seed << '\n';
    }
}

Curve mean_curve(std::span<const SweepRow> rows, double SweepRow::*field)
{
    std::map<double, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        const double v = r.*field;
        if (!r.error.empty() || !std::isfinite(v)) {
            continue;
        }
        auto& a = acc[r.value];
        a.first += v;
        a.second += 1;
    }
    Curve c;
    for (const auto& [x, a] : acc) {
        c.x.push_back(x);
        c.y.push_back(a.first / a.second);
    }
    return c;
}

double argmin(const Curve& c)
{
    if (c.x.empty()) {
        throw ConfigError("argmin of an empty curve");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.y.size(); ++k) {
        if (c.y[k] < c.y[best]) {
            best = k;
        }
    }
    return c.x[best];
}

Scale parse_scale(const std::string& s)
{
    if (s == "desk") {
        return Scale::Desk;
    }
    if (s == "full") {
        return Scale::Full;
    }
    throw ConfigError("unknown scale '" + s + "' (expected desk or full)");
}

ExperimentConfig figure_preset(int fig, Scale scale)
{
    if (fig < 1 || fig > 8) {
        throw ConfigError("figure id must be in 1..8");
    }
    ExperimentConfig c;
    if (scale == Scale::Full) {
        c.n = 500;
        c.split = {4000, 5000};
        c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else {
        c.n = 200;
        c.split = {800, 1000};
        c.seeds = {1, 2, 3};
    }
    c.task.kind = TaskKind::Filter;
    c.task.m = 5;
    c.lambda_grid = make_grid(0.5, 5.0, 0.25);
    switch (fig) {
    case 1:
        c.lambda_grid = make_grid(0.0, 5.0, 0.1);
        break;
    case 3:
    case 6:
    case 8:
        c.model = ModelKind::ES;
        break;
    case 4:
    case 5:
        c.critical_lambda = true;
        c.lambda_grid = make_grid(0.0, 5.0, 0.1);
        break;
    default:
        break;
    }
    if (fig == 5) {
        c.task.kind = TaskKind::MultiSineFilter;
    }
    if (fig == 6) {
        c.critical_lambda = true;
        c.lambda_grid = make_grid(0.0, 6.0, 0.1);
    }
    if (fig == 7 || fig == 8) {
        c.ridge = 0.0;
    }
    c.validate();
    return c;
}

namespace {

struct ModelRun {
    ModelKind model;
    std::uint64_t seed;
};

FigureReport figure_order(ExperimentConfig cfg, unsigned workers)
{
    FigureReport rep;
    rep.config = cfg;
    std::vector<ModelRun> jobs;
    for (auto m : {ModelKind::RS, ModelKind::ES}) {
        for (auto s : cfg.seeds) {
            jobs.push_back({m, s});
        }
    }
    const auto results = parallel_map(
        jobs,
        [&](const ModelRun& j) {
            ExperimentConfig c = cfg;
            c.model = j.model;
            return order_sweeps(c, j.seed, true);
        },
        workers);

    std::ostringstream csv;
    bool header = true;
    // Seed-averaged r per (model, direction), indexed like the grid.
    const std::size_t g = cfg.lambda_grid.size();
    std::map<std::pair<ModelKind, SweepDirection>, std::vector<double>> mean_r;
    std::map<std::pair<ModelKind, SweepDirection>, std::vector<double>> mean_rv;
    std::map<ModelKind, int> count;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (!results[k].ok()) {
            rep.checks.push_back(check_line(false, "order sweep failed: " + results[k].error));
            continue;
        }
        write_order_csv(csv, *results[k].value, jobs[k].model, jobs[k].seed, header);
        header = false;
        count[jobs[k].model] += 1;
        for (const auto& s : *results[k].value) {
            auto key = std::make_pair(jobs[k].model, s.direction);
            auto& r = mean_r[key];
            auto& rv = mean_rv[key];
            r.resize(g, 0.0);
            rv.resize(g, 0.0);
            const auto idx = static_cast<std::size_t>(
                std::find(cfg.lambda_grid.begin(), cfg.lambda_grid.end(), s.lambda) - cfg.lambda_grid.begin());
            r[idx] += s.r;
            rv[idx] += s.r_var;
        }
    }
    for (auto& [key, v] : mean_r) {
        for (auto& x : v) {
            x /= count[key.first];
        }
        for (auto& x : mean_rv[key]) {
            x /= count[key.first];
        }
    }
    rep.csv = csv.str();

    PlotSpec plot{"Order parameters vs coupling", "lambda", "r, r_var", false, {}};
    for (const auto& [key, v] : mean_r) {
        const std::string name = std::string(to_string(key.first)) + " " + to_string(key.second);
        plot.series.push_back({name + " r", cfg.lambda_grid, v});
        plot.series.push_back({name + " r_var", cfg.lambda_grid, mean_rv[key]});
    }
    rep.svg = render_svg(plot);

    const auto rs_f = mean_r[{ModelKind::RS, SweepDirection::Forward}];
    const auto es_f = mean_r[{ModelKind::ES, SweepDirection::Forward}];
    const auto es_b = mean_r[{ModelKind::ES, SweepDirection::Backward}];
    if (rs_f.empty() || es_f.empty() || es_b.empty()) {
        rep.checks.push_back(check_line(false, "missing sweep data"));
        return rep;
    }
    double onset = kNaN;
    for (std::size_t k = 0; k < g; ++k) {
        if (rs_f[k] > 0.3) {
            onset = cfg.lambda_grid[k];
            break;
        }
    }
    rep.checks.push_back(check_line(onset >= 1.3 && onset <= 2.0,
                                    "RS mean r first exceeds 0.3 at lambda " + fmt(onset) + " (expected 1.3..2.0)"));
    const Jump fj = largest_jump(cfg.lambda_grid, es_f);
    rep.checks.push_back(check_line(fj.delta >= 0.4 && fj.lambda_lo >= 2.0 && fj.lambda_hi <= 4.0,
                                    "ES forward jump " + fmt(fj.delta) + " at " + fmt(fj.lambda_lo) + "->" +
                                        fmt(fj.lambda_hi) + " (expected >= 0.4 within 2..4)"));
    const Jump bj = largest_jump(cfg.lambda_grid, es_b);
    rep.checks.push_back(check_line(bj.midpoint() < fj.midpoint(), "ES backward desynchronization at " +
                                                                       fmt(bj.midpoint()) + " below forward " +
                                                                       fmt(fj.midpoint())));
    return rep;
}

} // namespace

FigureReport reproduce_figure(int fig, Scale scale, std::span<const std::uint64_t> seeds, unsigned workers)
{
    ExperimentConfig cfg = figure_preset(fig, scale);
    if (!seeds.empty()) {
        cfg.seeds.assign(seeds.begin(), seeds.end());
    }
    cfg.workers = workers;
    if (fig == 1) {
        FigureReport rep = figure_order(cfg, workers);
        rep.fig = fig;
        rep.passed = !rep.checks.empty() && std::all_of(rep.checks.begin(), rep.checks.end(),
                                                        [](const std::string& s) { return s.rfind("PASS", 0) == 0; });
        return rep;
    }

    FigureReport rep;
    rep.fig = fig;
    rep.config = cfg;
    std::vector<SweepRow> rows;
    std::ostringstream csv;
    PlotSpec plot;
    plot.log_y = true;
    plot.ylabel = "MSE";

    auto both_models = [&](auto&& run) {
        for (auto m : {ModelKind::RS, ModelKind::ES}) {
            ExperimentConfig c = cfg;
            c.model = m;
            auto part = run(c);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    };

    switch (fig) {
    case 2:
    case 3:
    case 7:
    case 8: {
        std::vector<TaskSpec> tasks{cfg.task};
        if (fig == 3) {
            TaskSpec t2 = cfg.task;
            t2.kind = TaskKind::Predict;
            tasks.push_back(t2);
        }
        const double ridge = cfg.ridge;
        rows = error_sweep(cfg, tasks, std::span<const double>(&ridge, 1));
        write_rows_csv(csv, rows, cfg.lambda_grid.size() * cfg.seeds.size() * tasks.size());
        const auto rvar = filter_rows(rows, &SweepRow::r_var, cfg.model, cfg.task.kind, cfg.task.m);
        const auto samples = as_samples(rvar);
        const auto lc = samples.size() >= 3 ? critical_grid_point(samples) : std::nullopt;
        const auto mid = samples.size() >= 3 ? detect_critical(samples) : std::nullopt;
        plot.title = std::string(to_string(cfg.model)) + " error vs coupling";
        plot.xlabel = "lambda";
        for (const auto& t : tasks) {
            const auto train = filter_rows(rows, &SweepRow::train_mse, cfg.model, t.kind, t.m);
            const auto test = filter_rows(rows, &SweepRow::test_mse, cfg.model, t.kind, t.m);
            plot.series.push_back({std::string(to_string(t.kind)) + " train", train.x, train.y});
            plot.series.push_back({std::string(to_string(t.kind)) + " test", test.x, test.y});
        }
        if (!mid) {
            rep.checks.push_back(check_line(false, "no r_var transition detected"));
            break;
        }
        const double crit = mid.value();
        const double crit_grid = lc.value_or(crit);
        if (fig == 2) {
            const double best = argmin(filter_rows(rows, &SweepRow::test_mse, cfg.model, cfg.task.kind, cfg.task.m));
            rep.checks.push_back(check_line(std::abs(best - crit) <= 0.5, "test MSE minimum at " + fmt(best) +
                                                                              ", r_var critical " + fmt(crit) +
                                                                              " (tolerance 0.5)"));
        } else if (fig == 3) {
            for (const auto& t : tasks) {
                const auto test = log_curve(filter_rows(rows, &SweepRow::test_mse, cfg.model, t.kind, t.m));
                double below = 0.0, above = 0.0;
                int nb = 0, na = 0;
                for (std::size_t k = 0; k < test.x.size(); ++k) {
                    if (test.x[k] < crit_grid) {
                        below += test.y[k];
                        ++nb;
                    } else {
                        above += test.y[k];
                        ++na;
                    }
                }
                const bool ok = nb > 0 && na > 0 && above / na < below / nb;
                rep.checks.push_back(check_line(ok, std::string(to_string(t.kind)) +
                                                        ": mean log10 test MSE above critical " +
                                                        fmt(na ? above / na : kNaN) + " vs below " +
                                                        fmt(nb ? below / nb : kNaN)));
            }
        } else {
            const auto train = log_curve(filter_rows(rows, &SweepRow::train_mse, cfg.model, cfg.task.kind, cfg.task.m));
            const Jump j = largest_jump(train.x, train.y);
            const bool want_drop = fig == 7;
            const bool dir_ok = want_drop ? j.delta < 0.0 : j.delta > 0.0;
            const bool at_c = std::abs(j.midpoint() - crit) <= 0.5;
            rep.checks.push_back(check_line(dir_ok && at_c, std::string("largest log10 train MSE change ") +
                                                                fmt(j.delta) + " at " + fmt(j.midpoint()) +
                                                                " (expected a " + (want_drop ? "drop" : "rise") +
                                                                " at " + fmt(crit) + " +/- 0.5)"));
        }
        break;
    }
    case 4: {
        const std::vector<int> lengths{1, 5, 10, 15, 20};
        both_models([&](const ExperimentConfig& c) { return task_length_sweep(c, lengths, 0.0); });
        write_rows_csv(csv, rows, 2 * lengths.size() * cfg.seeds.size());
        plot.title = "Test error vs task length";
        plot.xlabel = "m";
        double ratio[2] = {kNaN, kNaN};
        for (auto m : {ModelKind::RS, ModelKind::ES}) {
            std::vector<SweepRow> sel;
            std::copy_if(rows.begin(), rows.end(), std::back_inserter(sel), [&](const SweepRow& r) { return r.model == m; });
            const auto test = mean_curve(sel, &SweepRow::test_mse);
            plot.series.push_back({to_string(m), test.x, test.y});
            double e5 = kNaN, e15 = kNaN;
            for (std::size_t k = 0; k < test.x.size(); ++k) {
                e5 = test.x[k] == 5 ? test.y[k] : e5;
                e15 = test.x[k] == 15 ? test.y[k] : e15;
            }
            ratio[m == ModelKind::RS ? 0 : 1] = e15 / e5;
        }
        rep.checks.push_back(check_line(ratio[0] > ratio[1], "test MSE ratio m=15/m=5: RS " + fmt(ratio[0]) +
                                                                 " vs ES " + fmt(ratio[1])));
        break;
    }
    case 5: {
        const std::vector<int> modes{1, 2, 4, 6, 8, 10};
        both_models([&](const ExperimentConfig& c) { return modes_sweep(c, modes, 0.0); });
        write_rows_csv(csv, rows, 2 * modes.size() * cfg.seeds.size());
        plot.title = "Test error vs frequency modes";
        plot.xlabel = "modes";
        Curve curves[2];
        for (auto m : {ModelKind::RS, ModelKind::ES}) {
            std::vector<SweepRow> sel;
            std::copy_if(rows.begin(), rows.end(), std::back_inserter(sel), [&](const SweepRow& r) { return r.model == m; });
            curves[m == ModelKind::RS ? 0 : 1] = mean_curve(sel, &SweepRow::test_mse);
            plot.series.push_back({to_string(m), curves[m == ModelKind::RS ? 0 : 1].x, curves[m == ModelKind::RS ? 0 : 1].y});
        }
        int wins = 0;
        const std::size_t n = std::min(curves[0].y.size(), curves[1].y.size());
        for (std::size_t k = 0; k < n; ++k) {
            wins += curves[1].y[k] <= curves[0].y[k];
        }
        rep.checks.push_back(check_line(2 * wins > static_cast<int>(n), "ES test MSE <= RS at " + std::to_string(wins) +
                                                                            " of " + std::to_string(n) + " mode counts"));
        break;
    }
    case 6: {
        const std::vector<double> degrees{3, 6, 12, 24, 48, 96};
        rows = degree_sweep(cfg, degrees, 0.0);
        write_rows_csv(csv, rows, degrees.size() * cfg.seeds.size());
        plot.title = "ES test error vs mean degree";
        plot.xlabel = "mean degree";
        const auto test = mean_curve(rows, &SweepRow::test_mse);
        plot.series.push_back({"ES test", test.x, test.y});
        const double best = argmin(test);
        const bool ends = test.y.size() == degrees.size() && test.y.front() > *std::min_element(test.y.begin(), test.y.end()) &&
                          test.y.back() > *std::min_element(test.y.begin(), test.y.end());
        rep.checks.push_back(check_line(best >= 6 && best <= 24 && ends,
                                        "test MSE minimum at mean degree " + fmt(best) + " (expected 6..24, larger at 3 and 96)"));
        break;
    }
    default:
        break;
    }
    rep.csv = csv.str();
    rep.svg = render_svg(plot);
    rep.passed = !rep.checks.empty() && std::all_of(rep.checks.begin(), rep.checks.end(),
                                                    [](const std::string& s) { return s.rfind("PASS", 0) == 0; });
    return rep;
}

} // namespace krc
