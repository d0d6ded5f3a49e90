#include "krc/reservoir.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace krc {

namespace {

// Covers Task 1 lags and Task 2 horizons up to 30 time units.
constexpr double kInputMargin = 32.0;

std::vector<double> integer_times(int from, int to)
{
    std::vector<double> out;
    for (int t = from; t <= to; ++t) {
        out.push_back(static_cast<double>(t));
    }
    return out;
}

double mean_phase(std::span<const double> theta)
{
    std::complex<double> z{0.0, 0.0};
    for (double th : theta) {
        z += std::polar(1.0, th);
    }
    return std::arg(z);
}

} // namespace

void DataSplit::validate() const
{
    if (train_end < 1 || test_end <= train_end) {
        throw ConfigError("data split needs 1 <= train_end < test_end");
    }
}

std::size_t median_frequency_node(std::span<const double> omega)
{
    if (omega.empty()) {
        throw ConfigError("no oscillators");
    }
    std::vector<std::size_t> idx(omega.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(omega[a]) < std::abs(omega[b]); });
    return idx[(idx.size() - 1) / 2];
}

TimeSeries experiment_input(const TaskSpec& task, const DataSplit& split, double dt)
{
    split.validate();
    return task_input(task, static_cast<double>(split.test_end) + 2.0 * kInputMargin, dt, -kInputMargin);
}

ReservoirRun run_reservoir(const ReservoirSpec& spec, std::shared_ptr<const TimeSeries> input)
{
    spec.split.validate();
    spec.readout.validate(spec.sample_dt);
    if (!input || input->t0() > 0.0 || input->t_end() < static_cast<double>(spec.split.test_end)) {
        throw RangeError("input signal does not cover the drive span");
    }
    const KuramotoSystem sys(spec.net, spec.omega, spec.coupling);
    const std::size_t n = sys.size();

    ReservoirRun run;
    run.input = input;
    run.input_nodes = {median_frequency_node(sys.omega())};
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.readout.include_input_nodes || i != run.input_nodes.front()) {
            run.feature_nodes.push_back(i);
        }
    }

    RelaxResult relaxed = relax_to_locked(sys, random_phases(n, spec.seed), spec.relax);
    run.locked = relaxed.locked;
    OscillatorState state = std::move(relaxed.state);

    const FrequencyHistory ground =
        run_driven(state, sys, nullptr, spec.ground.window, spec.ground.sample_dt, spec.relax.dt);
    run.r_ground = std::accumulate(ground.r.begin(), ground.r.end(), 0.0) / static_cast<double>(ground.r.size());
    run.r_var_ground = variance_r(ground.freq, spec.ground);
    run.mean_frequency = ground.freq.mean();

    // Affine map of the training-window range onto [-span/2, span/2].
    const TimeSeries window = input->slice(0.0, static_cast<double>(spec.split.train_end));
    const double lo = window.values().minCoeff();
    const double hi = window.values().maxCoeff();
    InputBinding binding;
    binding.nodes = run.input_nodes;
    binding.drive = input;
    binding.scale = hi > lo ? spec.input.phase_span / (hi - lo) : 1.0;
    binding.offset = -binding.scale * 0.5 * (lo + hi);
    if (spec.input.co_rotating) {
        binding.offset += mean_phase(state.theta);
        binding.frame_rate = run.mean_frequency;
    }

    state.t = 0.0;
    binding.frame_t0 = 0.0;
    run.history = run_driven(state, sys, &binding, static_cast<double>(spec.split.test_end), spec.sample_dt,
                             spec.relax.dt);
    return run;
}

std::vector<FitReport> fit_tasks(const ReservoirRun& run, const ReservoirSpec& spec, std::span<const TaskSpec> tasks,
                                 double ridge, std::vector<ReadoutModel>* models)
{
    if (tasks.empty()) {
        return {};
    }
    const auto train_times = integer_times(1, spec.split.train_end);
    const auto test_times = integer_times(spec.split.train_end + 1, spec.split.test_end);
    const Eigen::MatrixXd x_train = build_features(run.history, spec.readout, train_times, run.feature_nodes);
    const Eigen::MatrixXd x_test = build_features(run.history, spec.readout, test_times, run.feature_nodes);

    std::vector<Eigen::Index> col_begin;
    Eigen::Index total = 0;
    std::vector<TimeSeries> targets;
    for (const auto& task : tasks) {
        targets.push_back(task_target(task, *run.input));
        col_begin.push_back(total);
        total += targets.back().channels();
    }
    auto stack = [&](const std::vector<double>& times) {
        Eigen::MatrixXd y(static_cast<Eigen::Index>(times.size()), total);
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto& tgt = targets[k];
            for (Eigen::Index r = 0; r < y.rows(); ++r) {
                const Eigen::Index idx = tgt.index_of(times[static_cast<std::size_t>(r)]);
                y.block(r, col_begin[k], 1, tgt.channels()) = tgt.values().row(idx);
            }
        }
        return y;
    };
    const Eigen::MatrixXd y_train = stack(train_times);
    const Eigen::MatrixXd y_test = stack(test_times);

    ReadoutModel model = fit(x_train, y_train, ridge, spec.readout);
    model.nodes = run.feature_nodes;
    model.seed = spec.seed;
    const Eigen::MatrixXd p_train = model.predict(x_train);
    const Eigen::MatrixXd p_test = model.predict(x_test);

    std::vector<FitReport> reports;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const Eigen::Index c0 = col_begin[k];
        const Eigen::Index q = targets[k].channels();
        FitReport rep;
        rep.train_mse = mean_squared_error(p_train.middleCols(c0, q), y_train.middleCols(c0, q));
        rep.test_mse = mean_squared_error(p_test.middleCols(c0, q), y_test.middleCols(c0, q));
        rep.condition_estimate = model.condition_estimate;
        rep.n_train = train_times.size();
        rep.n_test = test_times.size();
        rep.locked = run.locked;
        rep.r = run.r_ground;
        rep.r_var = run.r_var_ground;
        reports.push_back(rep);
        if (models != nullptr) {
            ReadoutModel part = model;
            part.weights = model.weights.middleRows(c0, q);
            models->push_back(std::move(part));
        }
    }
    return reports;
}

FitReport run_experiment(const ReservoirSpec& spec, const TaskSpec& task, ReadoutModel* model)
{
    task.validate();
    auto input = std::make_shared<const TimeSeries>(experiment_input(task, spec.split, spec.relax.dt));
    const ReservoirRun run = run_reservoir(spec, input);
    std::vector<ReadoutModel> models;
    const auto reports = fit_tasks(run, spec, std::span<const TaskSpec>(&task, 1), spec.ridge, &models);
    if (model != nullptr) {
        *model = std::move(models.front());
    }
    return reports.front();
}

} // namespace krc
