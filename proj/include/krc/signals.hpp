#pragma once

// Benchmark input signals and supervised targets.

#include "krc/time_series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace krc {

/// Lorenz x-coordinate, (sigma, rho, beta) = (10, 28, 8/3). RK4 with an
/// internal step no larger than 0.01, 100-unit transient dropped, output
/// standardized to zero mean and unit variance. The seed perturbs the
/// initial condition. Samples cover [t0, t0 + duration] every dt.
TimeSeries lorenz_series(double duration, double dt, std::uint64_t seed, double t0 = 0.0);

/// Mackey-Glass x' = beta x(t - tau) / (1 + x(t - tau)^n) - gamma x with
/// (beta, gamma, n, tau) = (0.2, 0.1, 10, 17). RK4 (step <= 0.01) over a
/// linearly interpolated delay buffer, constant perturbed history near the
/// x = 1 equilibrium, 500-unit transient dropped, standardized.
TimeSeries mackey_glass_series(double duration, double dt, std::uint64_t seed, double t0 = 0.0);

struct SineMode {
    double amplitude = 1.0;
    double angular_freq = 1.0;
    double phase = 0.0;
    double shift = 0.0;
};

/// x(t) = (1/m) sum_i (a_i sin(b_i t + c_i) + d_i) for explicit modes.
TimeSeries multisine_series(double duration, double dt, const std::vector<SineMode>& modes, double t0 = 0.0);

/// Seeded modes: a ~ U(0.5, 1.5), b ~ U(0.1, 2), c ~ U(0, 2 pi), d ~ U(-0.5, 0.5).
std::vector<SineMode> random_sine_modes(int m, std::uint64_t seed);
TimeSeries multisine_series(double duration, double dt, int m, std::uint64_t seed, double t0 = 0.0);

/// Shifts and scales to zero mean and unit (population) variance.
TimeSeries standardize(const TimeSeries& x);

enum class TaskKind { Filter, Predict, MultiSineFilter };

struct TaskSpec {
    TaskKind kind = TaskKind::Filter;
    /// Filter length, prediction horizon, or sine mode count.
    int m = 5;
    double a = 1.0;
    double b = 0.5;
    double c = 0.25;
    /// Filter length applied to the multi-sine input.
    int filter_m = 5;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless m >= 1 and, for filters, a, b, c are nonzero.
    void validate() const;
    /// Number of target channels.
    int outputs() const { return kind == TaskKind::Predict ? m : 1; }
};

TaskKind parse_task_kind(const std::string& name);
const char* to_string(TaskKind kind);

/// y(t) = (1/m) sum_{k=1..m} (a x(t-k) + b x(t-k)^2 + c x(t-k)^3), lags of
/// one time unit, on the sample grid of x starting at x.t0() + m. RangeError
/// when x is shorter than the lag window.
TimeSeries task1_target(const TimeSeries& x, int m, double a, double b, double c);

/// Channel l (1-based) is y^l(t) = x(t + l - 1), on the sample grid of x up to
/// x.t_end() - (m - 1). RangeError when x is too short.
TimeSeries task2_target(const TimeSeries& x, int m);

/// Input signal for a task over [t0, t0 + duration].
TimeSeries task_input(const TaskSpec& task, double duration, double dt, double t0 = 0.0);

/// Target series for a task from its input.
TimeSeries task_target(const TaskSpec& task, const TimeSeries& x);

} // namespace krc
