#include "krc/cli.hpp"

#include "krc/config.hpp"
#include "krc/error.hpp"
#include "krc/experiments.hpp"
#include "krc/parallel.hpp"
#include "krc/svg_plot.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace krc {

namespace {

namespace fs = std::filesystem;

// Flags shared by every subcommand; an empty string means "not given".
struct Flags {
    std::string config;
    std::string seed;
    std::string out;
    std::string run_id;
    std::string workers;
    std::string model;
    std::string n;
    std::string k;
    std::string lambda;
    std::string task;
    std::string m;
    std::string ridge;
    std::string train_end;
    std::string test_end;
    std::string s;
    std::string delta_t;
    bool include_input = false;
    bool swap_topology = false;
};

void add_common(CLI::App* app, Flags& f)
{
    app->add_option("--config", f.config, "Key-value config file; flags override it");
    app->add_option("--seed", f.seed, "Seed or seed list (e.g. 1,2,3 or 1:10)");
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--run-id", f.run_id, "Subdirectory name under --out");
    app->add_option("--workers", f.workers, "Worker threads (0 = all cores)");
}

void add_model(CLI::App* app, Flags& f)
{
    app->add_option("--model", f.model, "rs or es");
    app->add_option("--n", f.n, "Number of oscillators");
    app->add_option("--k", f.k, "Erdos-Renyi mean degree");
    app->add_flag("--swap-topology", f.swap_topology, "Run RS on an ER graph or ES on the complete graph");
}

void add_readout(CLI::App* app, Flags& f)
{
    app->add_option("--task", f.task, "filter, predict or multisine");
    app->add_option("--m", f.m, "Task length, horizon or mode count");
    app->add_option("--ridge", f.ridge, "Ridge penalty (0 = minimum-norm least squares)");
    app->add_option("--train-end", f.train_end, "Last training time");
    app->add_option("--test-end", f.test_end, "Last test time");
    app->add_option("--s", f.s, "Readout taps");
    app->add_option("--delta-t", f.delta_t, "Readout tap spacing");
    app->add_flag("--include-input-nodes", f.include_input, "Use clamped nodes as readout features");
}

double number(const std::string& flag, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) {
            return d;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("--" + flag + " expects a number, got '" + v + "'");
}

int integer(const std::string& flag, const std::string& v)
{
    const double d = number(flag, v);
    if (d != std::floor(d)) {
        throw ConfigError("--" + flag + " expects an integer, got '" + v + "'");
    }
    return static_cast<int>(d);
}

ExperimentConfig resolve(const Flags& f)
{
    ExperimentConfig c;
    if (!f.config.empty()) {
        c = ExperimentConfig::from_key_values(KeyValueConfig::parse_file(f.config));
    }
    if (!f.model.empty()) {
        c.model = parse_model(f.model);
    }
    if (!f.n.empty()) {
        const int n = integer("n", f.n);
        if (n < 2) {
            throw ConfigError("--n must be at least 2");
        }
        c.n = static_cast<std::size_t>(n);
    }
    if (!f.k.empty() && f.k.find_first_of(":,") == std::string::npos) {
        c.mean_degree = number("k", f.k);
    }
    c.swap_topology = c.swap_topology || f.swap_topology;
    if (!f.lambda.empty()) {
        if (f.lambda == "critical") {
            c.critical_lambda = true;
        } else {
            c.critical_lambda = false;
            c.lambda_grid = parse_grid(f.lambda);
        }
    }
    if (!f.task.empty()) {
        c.task.kind = parse_task_kind(f.task);
    }
    if (!f.m.empty() && f.m.find_first_of(":,") == std::string::npos) {
        c.task.m = integer("m", f.m);
    }
    if (!f.ridge.empty()) {
        c.ridge = number("ridge", f.ridge);
    }
    if (!f.train_end.empty()) {
        c.split.train_end = integer("train-end", f.train_end);
    }
    if (!f.test_end.empty()) {
        c.split.test_end = integer("test-end", f.test_end);
    }
    if (!f.s.empty()) {
        c.readout.s = integer("s", f.s);
    }
    if (!f.delta_t.empty()) {
        c.readout.delta_t = number("delta-t", f.delta_t);
    }
    c.readout.include_input_nodes = c.readout.include_input_nodes || f.include_input;
    if (!f.seed.empty()) {
        c.seeds = parse_seeds(f.seed);
    }
    if (!f.workers.empty()) {
        const int w = integer("workers", f.workers);
        if (w < 0) {
            throw ConfigError("--workers must be non-negative");
        }
        c.workers = static_cast<unsigned>(w);
    }
    if (!f.out.empty()) {
        c.output_dir = f.out;
    }
    c.validate();
    return c;
}

std::vector<int> int_list(const std::string& flag, const std::string& text)
{
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        if (v < 1 || v != std::floor(v)) {
            throw ConfigError("--" + flag + " values must be positive integers");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// "lo:hi" doubles from lo up to hi; "lo:hi:step" and lists are linear.
std::vector<double> degree_list(const std::string& text)
{
    if (std::count(text.begin(), text.end(), ':') == 1) {
        const auto colon = text.find(':');
        const double lo = number("k", text.substr(0, colon));
        const double hi = number("k", text.substr(colon + 1));
        if (!(lo >= 1.0) || !(hi >= lo)) {
            throw ConfigError("--k range needs 1 <= lo <= hi");
        }
        std::vector<double> out;
        for (double k = lo; k <= hi * (1 + 1e-12); k *= 2) {
            out.push_back(k);
        }
        return out;
    }
    return parse_grid(text);
}

fs::path prepare_dir(const ExperimentConfig& c, const std::string& run_id)
{
    const fs::path dir = fs::path(c.output_dir) / run_id;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("cannot create output directory " + dir.string());
    }
    std::ofstream probe(dir / "resolved.cfg");
    if (!probe) {
        throw ConfigError("output directory " + dir.string() + " is not writable");
    }
    c.to_key_values().write(probe);
    return dir;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream os(p);
    os << text;
    if (!os) {
        throw ConfigError("cannot write " + p.string());
    }
}

void write_graphs(const fs::path& dir, const ExperimentConfig& c)
{
    for (auto seed : c.seeds) {
        const SeededSetup setup = make_setup(c, seed);
        std::ofstream os(dir / ("graph-" + std::to_string(seed) + ".txt"));
        write_edge_list(os, *setup.net);
    }
}

std::string default_id(const std::string& cmd, const ExperimentConfig& c)
{
    std::string m = to_string(c.model);
    std::transform(m.begin(), m.end(), m.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return cmd + "-" + m;
}

int rows_status(std::span<const SweepRow> rows, std::ostream& err)
{
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            ++failed;
            err << "job failed (seed " << r.seed << ", " << r.axis << "=" << r.value << "): " << r.error << '\n';
        }
    }
    return !rows.empty() && failed == rows.size() ? kExitRuntime : kExitOk;
}

void print_rows(std::ostream& out, std::span<const SweepRow> rows)
{
    out << std::left << std::setw(5) << "model" << std::setw(6) << "seed" << std::setw(10) << "task" << std::setw(5)
        << "m" << std::setw(12) << "axis" << std::setw(10) << "value" << std::setw(10) << "lambda" << std::setw(9)
        << "r" << std::setw(9) << "r_var" << std::setw(14) << "train_mse" << std::setw(14) << "test_mse" << "locked\n";
    for (const auto& r : rows) {
        out << std::setw(5) << to_string(r.model) << std::setw(6) << r.seed << std::setw(10) << to_string(r.task)
            << std::setw(5) << r.m << std::setw(12) << r.axis << std::setw(10) << r.value << std::setw(10)
            << r.lambda << std::setw(9) << std::setprecision(4) << r.r << std::setw(9) << r.r_var << std::setw(14)
            << std::setprecision(6) << r.train_mse << std::setw(14) << r.test_mse << (r.locked ? "yes" : "no")
            << '\n';
    }
}

PlotSpec rows_plot(std::span<const SweepRow> rows, const std::string& title, const std::string& xlabel)
{
    PlotSpec p{title, xlabel, "MSE", true, {}};
    std::map<std::string, std::vector<SweepRow>> groups;
    for (const auto& r : rows) {
        groups[std::string(to_string(r.model)) + " " + to_string(r.task) + " m=" + std::to_string(r.m)].push_back(r);
    }
    for (const auto& [name, g] : groups) {
        const auto train = mean_curve(g, &SweepRow::train_mse);
        const auto test = mean_curve(g, &SweepRow::test_mse);
        p.series.push_back({name + " train", train.x, train.y});
        p.series.push_back({name + " test", test.x, test.y});
    }
    return p;
}

int finish_rows(const fs::path& dir, std::span<const SweepRow> rows, std::size_t expected, const PlotSpec& plot,
                std::ostream& out, std::ostream& err)
{
    std::ostringstream csv;
    write_rows_csv(csv, rows, expected);
    write_text(dir / "data.csv", csv.str());
    write_text(dir / "plot.svg", render_svg(plot));
    print_rows(out, rows);
    out << "wrote " << (dir / "data.csv").string() << '\n';
    return rows_status(rows, err);
}

double single_lambda(const ExperimentConfig& c)
{
    if (c.critical_lambda) {
        return 0.0;
    }
    if (c.lambda_grid.size() != 1) {
        throw ConfigError("--lambda must be a single value or 'critical' for this command");
    }
    return c.lambda_grid.front();
}

void warn_topology(const ExperimentConfig& c, std::ostream& err)
{
    if (c.swap_topology) {
        err << "warning: " << to_string(c.model) << " is running on the "
            << (c.model == ModelKind::RS ? "Erdos-Renyi" : "complete") << " graph (topology override)\n";
    }
}

int cmd_sweep_order(const Flags& f, bool backward, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig c = resolve(f);
    warn_topology(c, err);
    if (c.critical_lambda) {
        throw ConfigError("sweep-order needs an explicit lambda grid");
    }
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("sweep-order", c) : f.run_id);
    write_graphs(dir, c);
    const auto results = parallel_map(c.seeds, [&](std::uint64_t seed) { return order_sweeps(c, seed, backward); },
                                      c.workers);
    std::ostringstream csv;
    PlotSpec plot{std::string(to_string(c.model)) + " order parameters", "lambda", "r, r_var", false, {}};
    std::size_t failed = 0;
    out << std::left << std::setw(6) << "seed" << std::setw(16) << "lambda_c(r_var)" << "first r>0.3\n";
    for (std::size_t k = 0; k < c.seeds.size(); ++k) {
        if (!results[k].ok()) {
            err << "seed " << c.seeds[k] << " failed: " << results[k].error << '\n';
            ++failed;
            continue;
        }
        const auto& s = *results[k].value;
        write_sweep_csv(csv, s, c.seeds[k], csv.tellp() == 0);
        std::vector<OrderParamSample> fwd;
        std::copy_if(s.begin(), s.end(), std::back_inserter(fwd),
                     [](const auto& p) { return p.direction == SweepDirection::Forward; });
        PlotSeries r{"r seed " + std::to_string(c.seeds[k]), {}, {}};
        PlotSeries rv{"r_var seed " + std::to_string(c.seeds[k]), {}, {}};
        std::string onset = "-";
        for (const auto& p : fwd) {
            r.x.push_back(p.lambda);
            r.y.push_back(p.r);
            rv.x.push_back(p.lambda);
            rv.y.push_back(p.r_var);
            if (onset == "-" && p.r > 0.3) {
                onset = std::to_string(p.lambda);
            }
        }
        plot.series.push_back(r);
        plot.series.push_back(rv);
        const auto lc = fwd.size() >= 3 ? detect_critical(fwd) : std::nullopt;
        out << std::setw(6) << c.seeds[k] << std::setw(16) << (lc ? std::to_string(*lc) : "none") << onset << '\n';
    }
    write_text(dir / "data.csv", csv.str());
    write_text(dir / "plot.svg", render_svg(plot));
    out << "wrote " << (dir / "data.csv").string() << '\n';
    return failed == c.seeds.size() ? kExitRuntime : kExitOk;
}

int cmd_sweep_error(const Flags& f, const std::string& ridges_text, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig c = resolve(f);
    warn_topology(c, err);
    if (c.critical_lambda) {
        throw ConfigError("sweep-error needs an explicit lambda grid");
    }
    std::vector<double> ridges{c.ridge};
    if (!ridges_text.empty()) {
        ridges = parse_grid(ridges_text);
    }
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("sweep-error", c) : f.run_id);
    write_graphs(dir, c);
    const std::vector<TaskSpec> tasks{c.task};
    const auto rows = error_sweep(c, tasks, ridges);
    return finish_rows(dir, rows, c.lambda_grid.size() * c.seeds.size() * ridges.size(),
                       rows_plot(rows, "Error vs coupling", "lambda"), out, err);
}

int cmd_task_length(const Flags& f, const std::string& lengths_text, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig c = resolve(f);
    warn_topology(c, err);
    const auto lengths = int_list("lengths", lengths_text);
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("task-length", c) : f.run_id);
    write_graphs(dir, c);
    const auto rows = task_length_sweep(c, lengths, single_lambda(c));
    return finish_rows(dir, rows, lengths.size() * c.seeds.size(), rows_plot(rows, "Error vs task length", "m"),
                       out, err);
}

int cmd_modes(const Flags& f, const std::string& modes_text, std::ostream& out, std::ostream& err)
{
    const ExperimentConfig c = resolve(f);
    warn_topology(c, err);
    const auto modes = int_list("modes", modes_text);
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("modes", c) : f.run_id);
    write_graphs(dir, c);
    const auto rows = modes_sweep(c, modes, single_lambda(c));
    return finish_rows(dir, rows, modes.size() * c.seeds.size(),
                       rows_plot(rows, "Error vs frequency modes", "modes"), out, err);
}

int cmd_degree(const Flags& f, std::ostream& out, std::ostream& err)
{
    Flags g = f;
    const std::string k_text = f.k.empty() ? "3:96" : f.k;
    g.k.clear();
    const ExperimentConfig c = resolve(g);
    if (c.model != ModelKind::ES && !c.swap_topology) {
        throw ConfigError("degree sweeps need an Erdos-Renyi topology (--model es or --swap-topology)");
    }
    const auto degrees = degree_list(k_text);
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("degree", c) : f.run_id);
    const auto rows = degree_sweep(c, degrees, single_lambda(c));
    return finish_rows(dir, rows, degrees.size() * c.seeds.size(), rows_plot(rows, "Error vs mean degree", "k"),
                       out, err);
}

int cmd_run(const Flags& f, std::ostream& out, std::ostream& err)
{
    Flags g = f;
    if (g.seed.empty()) {
        g.seed = "1";
    }
    const ExperimentConfig c = resolve(g);
    warn_topology(c, err);
    if (c.seeds.size() != 1) {
        throw ConfigError("run takes a single seed");
    }
    const std::uint64_t seed = c.seeds.front();
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? default_id("run", c) : f.run_id);
    write_graphs(dir, c);

    const SeededSetup setup = make_setup(c, seed);
    double lambda = single_lambda(c);
    if (c.critical_lambda) {
        const auto lc = critical_lambda(c, seed);
        if (!lc) {
            err << "no transition detected in the order sweep\n";
            return kExitRuntime;
        }
        lambda = *lc;
    }
    const ReservoirSpec spec = make_reservoir_spec(c, setup, lambda, seed);
    ReadoutModel model;
    const FitReport rep = run_experiment(spec, seeded_task(c.task, seed), &model);
    {
        std::ofstream os(dir / "model.csv");
        save_model(os, model);
    }
    SweepRow row;
    row.model = c.model;
    row.seed = seed;
    row.task = c.task.kind;
    row.m = c.task.m;
    row.value = lambda;
    row.lambda = lambda;
    row.ridge = c.ridge;
    row.r = rep.r;
    row.r_var = rep.r_var;
    row.train_mse = rep.train_mse;
    row.test_mse = rep.test_mse;
    row.locked = rep.locked;
    std::ostringstream csv;
    write_rows_csv(csv, std::span<const SweepRow>(&row, 1), 1);
    write_text(dir / "data.csv", csv.str());
    out << std::setprecision(6) << "model=" << to_string(c.model) << " task=" << to_string(c.task.kind)
        << " m=" << c.task.m << " lambda=" << lambda << " seed=" << seed << " locked=" << (rep.locked ? 1 : 0)
        << " r=" << rep.r << " r_var=" << rep.r_var << " train_mse=" << rep.train_mse
        << " test_mse=" << rep.test_mse << " n_train=" << rep.n_train << " n_test=" << rep.n_test
        << " condition=" << rep.condition_estimate << '\n';
    return kExitOk;
}

int cmd_gen_signal(const Flags& f, const std::string& signal, double duration, double dt, std::ostream& out)
{
    Flags g = f;
    if (g.seed.empty()) {
        g.seed = "1";
    }
    ExperimentConfig c = resolve(g);
    if (!(duration > 0.0) || !(dt > 0.0)) {
        throw ConfigError("--duration and --dt must be positive");
    }
    const std::uint64_t seed = c.seeds.front();
    TaskSpec t = seeded_task(c.task, seed);
    if (signal == "lorenz") {
        t.kind = TaskKind::Filter;
    } else if (signal == "mackey-glass") {
        t.kind = TaskKind::Predict;
    } else if (signal == "multisine") {
        t.kind = TaskKind::MultiSineFilter;
    } else {
        throw ConfigError("unknown signal '" + signal + "' (lorenz, mackey-glass, multisine)");
    }
    c.task.kind = t.kind;
    const TimeSeries x = task_input(t, duration, dt);
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? "gen-signal-" + signal : f.run_id);
    std::ofstream os(dir / "data.csv");
    write_csv(os, x);
    out << "wrote " << x.samples() << " samples of " << signal << " to " << (dir / "data.csv").string() << '\n';
    return kExitOk;
}

int cmd_reproduce(const Flags& f, int fig, const std::string& scale, std::ostream& out)
{
    std::vector<std::uint64_t> seeds;
    if (!f.seed.empty()) {
        seeds = parse_seeds(f.seed);
    }
    const unsigned workers = f.workers.empty() ? 0u : static_cast<unsigned>(integer("workers", f.workers));
    const FigureReport rep = reproduce_figure(fig, parse_scale(scale), seeds, workers);
    ExperimentConfig c = rep.config;
    if (!f.out.empty()) {
        c.output_dir = f.out;
    }
    const fs::path dir = prepare_dir(c, f.run_id.empty() ? "fig" + std::to_string(fig) + "-" + scale : f.run_id);
    write_text(dir / "data.csv", rep.csv);
    write_text(dir / "plot.svg", rep.svg);
    std::ostringstream checks;
    for (const auto& line : rep.checks) {
        checks << line << '\n';
        out << line << '\n';
    }
    write_text(dir / "checks.txt", checks.str());
    out << "figure " << fig << ": " << (rep.passed ? "PASS" : "FAIL") << " (" << dir.string() << ")\n";
    return rep.passed ? kExitOk : kExitAcceptance;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reservoir computing on networked Kuramoto oscillators", "kuramoto-rc"};
    app.require_subcommand(1);
    Flags f;

    auto* sweep_order = app.add_subcommand("sweep-order", "Order parameters r and r_var along a lambda sweep");
    bool backward = false;
    add_common(sweep_order, f);
    add_model(sweep_order, f);
    sweep_order->add_option("--lambda", f.lambda, "Grid lo:hi:step or list");
    sweep_order->add_flag("--backward", backward, "Append a backward sweep from the forward end state");

    auto* sweep_error = app.add_subcommand("sweep-error", "Train and test error along a lambda sweep");
    std::string ridges;
    add_common(sweep_error, f);
    add_model(sweep_error, f);
    add_readout(sweep_error, f);
    sweep_error->add_option("--lambda", f.lambda, "Grid lo:hi:step or list");
    sweep_error->add_option("--ridges", ridges, "Several ridge values (overrides --ridge)");

    auto* task_length = app.add_subcommand("task-length", "Test error against task length m");
    std::string lengths = "1,5,10,15,20";
    add_common(task_length, f);
    add_model(task_length, f);
    add_readout(task_length, f);
    task_length->add_option("--lambda", f.lambda, "Coupling value or 'critical'");
    task_length->add_option("--lengths", lengths, "Task lengths")->capture_default_str();

    auto* modes = app.add_subcommand("modes", "Test error against the number of multi-sine modes");
    std::string mode_list = "1,2,4,6,8,10";
    add_common(modes, f);
    add_model(modes, f);
    add_readout(modes, f);
    modes->add_option("--lambda", f.lambda, "Coupling value or 'critical'");
    modes->add_option("--modes", mode_list, "Mode counts")->capture_default_str();

    auto* degree = app.add_subcommand("degree", "Test error against Erdos-Renyi mean degree");
    add_common(degree, f);
    degree->add_option("--model", f.model, "rs or es");
    degree->add_option("--n", f.n, "Number of oscillators");
    degree->add_option("--k", f.k, "Degrees: lo:hi doubles, lo:hi:step or a list");
    degree->add_flag("--swap-topology", f.swap_topology, "Run RS on the ER graphs");
    add_readout(degree, f);
    degree->add_option("--lambda", f.lambda, "Coupling value or 'critical'");

    auto* run = app.add_subcommand("run", "Single experiment, one FitReport line");
    add_common(run, f);
    add_model(run, f);
    add_readout(run, f);
    run->add_option("--lambda", f.lambda, "Coupling value or 'critical'");

    auto* gen = app.add_subcommand("gen-signal", "Write a benchmark input signal as CSV");
    std::string signal = "lorenz";
    double duration = 100.0;
    double dt = 0.01;
    add_common(gen, f);
    gen->add_option("--signal", signal, "lorenz, mackey-glass or multisine")->capture_default_str();
    gen->add_option("--m", f.m, "Mode count for multisine");
    gen->add_option("--duration", duration, "Length in time units")->capture_default_str();
    gen->add_option("--dt", dt, "Sampling interval")->capture_default_str();

    auto* repro = app.add_subcommand("reproduce", "Figure preset with a qualitative pass/fail check");
    int fig = 1;
    std::string scale = "desk";
    add_common(repro, f);
    repro->add_option("--fig", fig, "Figure 1..8")->required();
    repro->add_option("--scale", scale, "desk or full")->capture_default_str();

    std::vector<const char*> argv{"kuramoto-rc"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep_order) {
            return cmd_sweep_order(f, backward, out, err);
        }
        if (*sweep_error) {
            return cmd_sweep_error(f, ridges, out, err);
        }
        if (*task_length) {
            return cmd_task_length(f, lengths, out, err);
        }
        if (*modes) {
            return cmd_modes(f, mode_list, out, err);
        }
        if (*degree) {
            return cmd_degree(f, out, err);
        }
        if (*run) {
            return cmd_run(f, out, err);
        }
        if (*gen) {
            return cmd_gen_signal(f, signal, duration, dt, out);
        }
        if (*repro) {
            return cmd_reproduce(f, fig, scale, out);
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

} // namespace krc
