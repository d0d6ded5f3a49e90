#include "krc/signals.hpp"

#include "krc/error.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

namespace krc {

namespace {

constexpr double kMaxInternalStep = 0.01;

struct Grid {
    long long samples;
    int substeps;
    double h;
};

// Output grid of `duration / dt + 1` samples; the internal step divides dt.
Grid make_grid(double duration, double dt)
{
    if (!(duration > 0.0) || !(dt > 0.0)) {
        throw ConfigError("signal needs duration > 0 and dt > 0");
    }
    const double ratio = duration / dt;
    const auto samples = static_cast<long long>(std::floor(ratio + 1e-9)) + 1;
    const int substeps = static_cast<int>(std::ceil(dt / kMaxInternalStep - 1e-9));
    return {samples, std::max(substeps, 1), dt / std::max(substeps, 1)};
}

using Vec3 = std::array<double, 3>;

Vec3 lorenz_rhs(const Vec3& s)
{
    constexpr double sigma = 10.0;
    constexpr double rho = 28.0;
    constexpr double beta = 8.0 / 3.0;
    return {sigma * (s[1] - s[0]), s[0] * (rho - s[2]) - s[1], s[0] * s[1] - beta * s[2]};
}

void lorenz_step(Vec3& s, double h)
{
    auto axpy = [](const Vec3& a, double f, const Vec3& b) {
        return Vec3{a[0] + f * b[0], a[1] + f * b[1], a[2] + f * b[2]};
    };
    const Vec3 k1 = lorenz_rhs(s);
    const Vec3 k2 = lorenz_rhs(axpy(s, 0.5 * h, k1));
    const Vec3 k3 = lorenz_rhs(axpy(s, 0.5 * h, k2));
    const Vec3 k4 = lorenz_rhs(axpy(s, h, k3));
    for (int i = 0; i < 3; ++i) {
        s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

} // namespace

TimeSeries standardize(const TimeSeries& x)
{
    Eigen::MatrixXd v = x.values();
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double mean = v.col(c).mean();
        v.col(c).array() -= mean;
        const double sd = std::sqrt(v.col(c).squaredNorm() / static_cast<double>(v.rows()));
        if (sd > 0.0) {
            v.col(c) /= sd;
        }
    }
    return TimeSeries(x.t0(), x.dt(), std::move(v), x.channel_names());
}

TimeSeries lorenz_series(double duration, double dt, std::uint64_t seed, double t0)
{
    const Grid g = make_grid(duration, dt);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    Vec3 s{1.0 + jitter(rng), 1.0 + jitter(rng), 1.0 + jitter(rng)};

    const auto transient_steps = static_cast<long long>(std::llround(100.0 / g.h));
    for (long long k = 0; k < transient_steps; ++k) {
        lorenz_step(s, g.h);
    }
    Eigen::MatrixXd values(g.samples, 1);
    for (long long k = 0; k < g.samples; ++k) {
        if (k > 0) {
            for (int sub = 0; sub < g.substeps; ++sub) {
                lorenz_step(s, g.h);
            }
        }
        values(k, 0) = s[0];
    }
    return standardize(TimeSeries(t0, dt, std::move(values)));
}

TimeSeries mackey_glass_series(double duration, double dt, std::uint64_t seed, double t0)
{
    constexpr double beta = 0.2;
    constexpr double gamma = 0.1;
    constexpr double power = 10.0;
    constexpr double tau = 17.0;
    const Grid g = make_grid(duration, dt);
    const double h = g.h;

    // History buffer on the internal grid; delayed values between knots are
    // linearly interpolated (RK4 half steps fall between knots).
    const auto lag = static_cast<long long>(std::ceil(tau / h));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.05, 0.25);
    const double x_hist = 1.0 + jitter(rng);
    std::deque<double> buf(static_cast<std::size_t>(lag + 2), x_hist);
    double x = x_hist;

    auto delayed = [&](double back) {
        // Value at (now - back); buf.back() is x(now - h) ... buf.front() oldest.
        // Index of x(now - j*h) is buf.size() - j for j >= 1.
        const double u = back / h;
        const auto j = static_cast<long long>(std::floor(u));
        const double frac = u - static_cast<double>(j);
        auto at = [&](long long jj) {
            return jj == 0 ? x : buf[buf.size() - static_cast<std::size_t>(jj)];
        };
        return (1.0 - frac) * at(j) + frac * at(j + 1);
    };
    auto f = [&](double xv, double xd) { return beta * xd / (1.0 + std::pow(xd, power)) - gamma * xv; };

    auto step = [&]() {
        const double d0 = delayed(tau);
        const double dh = delayed(tau - 0.5 * h);
        const double d1 = delayed(tau - h);
        const double k1 = f(x, d0);
        const double k2 = f(x + 0.5 * h * k1, dh);
        const double k3 = f(x + 0.5 * h * k2, dh);
        const double k4 = f(x + h * k3, d1);
        buf.push_back(x);
        buf.pop_front();
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const auto transient_steps = static_cast<long long>(std::llround(500.0 / h));
    for (long long k = 0; k < transient_steps; ++k) {
        step();
    }
    Eigen::MatrixXd values(g.samples, 1);
    for (long long k = 0; k < g.samples; ++k) {
        if (k > 0) {
            for (int sub = 0; sub < g.substeps; ++sub) {
                step();
            }
        }
        values(k, 0) = x;
    }
    return standardize(TimeSeries(t0, dt, std::move(values)));
}

TimeSeries multisine_series(double duration, double dt, const std::vector<SineMode>& modes, double t0)
{
    if (modes.empty()) {
        throw ConfigError("multi-sine signal needs at least one mode");
    }
    const Grid g = make_grid(duration, dt);
    const double inv_m = 1.0 / static_cast<double>(modes.size());
    Eigen::MatrixXd values(g.samples, 1);
    for (long long k = 0; k < g.samples; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        double acc = 0.0;
        for (const auto& md : modes) {
            acc += md.amplitude * std::sin(md.angular_freq * t + md.phase) + md.shift;
        }
        values(k, 0) = inv_m * acc;
    }
    return TimeSeries(t0, dt, std::move(values));
}

std::vector<SineMode> random_sine_modes(int m, std::uint64_t seed)
{
    if (m < 1) {
        throw ConfigError("multi-sine signal needs m >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.5);
    std::uniform_real_distribution<double> freq(0.1, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> shift(-0.5, 0.5);
    std::vector<SineMode> modes(static_cast<std::size_t>(m));
    for (auto& md : modes) {
        md.amplitude = amp(rng);
        md.angular_freq = freq(rng);
        md.phase = phase(rng);
        md.shift = shift(rng);
    }
    return modes;
}

TimeSeries multisine_series(double duration, double dt, int m, std::uint64_t seed, double t0)
{
    return multisine_series(duration, dt, random_sine_modes(m, seed), t0);
}

void TaskSpec::validate() const
{
    if (m < 1) {
        throw ConfigError("task length m must be >= 1");
    }
    if ((kind == TaskKind::Filter || kind == TaskKind::MultiSineFilter) && (a == 0.0 || b == 0.0 || c == 0.0)) {
        throw ConfigError("filter coefficients a, b, c must all be nonzero");
    }
    if (kind == TaskKind::MultiSineFilter && filter_m < 1) {
        throw ConfigError("multi-sine filter length must be >= 1");
    }
}

TaskKind parse_task_kind(const std::string& name)
{
    if (name == "filter") {
        return TaskKind::Filter;
    }
    if (name == "predict") {
        return TaskKind::Predict;
    }
    if (name == "multisine") {
        return TaskKind::MultiSineFilter;
    }
    throw ConfigError("unknown task kind '" + name + "' (expected filter, predict or multisine)");
}

const char* to_string(TaskKind kind)
{
    switch (kind) {
    case TaskKind::Filter:
        return "filter";
    case TaskKind::Predict:
        return "predict";
    case TaskKind::MultiSineFilter:
        return "multisine";
    }
    return "?";
}

namespace {

// Samples per unit time lag, or 0 when 1/dt is not an integer.
long long unit_lag(double dt)
{
    const double ratio = 1.0 / dt;
    const long long r = std::llround(ratio);
    return std::abs(ratio - static_cast<double>(r)) < 1e-9 * ratio ? r : 0;
}

} // namespace

TimeSeries task1_target(const TimeSeries& x, int m, double a, double b, double c)
{
    if (m < 1) {
        throw ConfigError("task length m must be >= 1");
    }
    const long long lag = unit_lag(x.dt());
    if (lag == 0) {
        throw ConfigError("task 1 needs a sampling interval that divides one time unit");
    }
    const Eigen::Index offset = lag * m;
    const Eigen::Index rows = x.samples() - offset;
    if (rows <= 0) {
        std::ostringstream msg;
        msg << "input of " << x.samples() << " samples is too short for a filter of length " << m;
        throw RangeError(msg.str());
    }
    const Eigen::ArrayXd v = x.values().col(0).array();
    const Eigen::ArrayXd poly = a * v + b * v.square() + c * v.cube();
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(rows);
    for (int k = 1; k <= m; ++k) {
        acc += poly.segment(offset - k * lag, rows);
    }
    acc /= static_cast<double>(m);
    return TimeSeries(x.time_at(offset), x.dt(), Eigen::MatrixXd(acc.matrix()), {"y"});
}

TimeSeries task2_target(const TimeSeries& x, int m)
{
    if (m < 1) {
        throw ConfigError("prediction horizon m must be >= 1");
    }
    const long long lag = unit_lag(x.dt());
    if (lag == 0) {
        throw ConfigError("task 2 needs a sampling interval that divides one time unit");
    }
    const Eigen::Index reach = lag * (m - 1);
    const Eigen::Index rows = x.samples() - reach;
    if (rows <= 0) {
        std::ostringstream msg;
        msg << "input of " << x.samples() << " samples is too short for horizon " << m;
        throw RangeError(msg.str());
    }
    Eigen::MatrixXd y(rows, m);
    std::vector<std::string> names;
    for (int l = 1; l <= m; ++l) {
        y.col(l - 1) = x.values().col(0).segment((l - 1) * lag, rows);
        names.push_back("y" + std::to_string(l));
    }
    return TimeSeries(x.t0(), x.dt(), std::move(y), std::move(names));
}

TimeSeries task_input(const TaskSpec& task, double duration, double dt, double t0)
{
    task.validate();
    switch (task.kind) {
    case TaskKind::Filter:
        return lorenz_series(duration, dt, task.seed, t0);
    case TaskKind::Predict:
        return mackey_glass_series(duration, dt, task.seed, t0);
    case TaskKind::MultiSineFilter:
        return multisine_series(duration, dt, task.m, task.seed, t0);
    }
    throw ConfigError("unknown task kind");
}

TimeSeries task_target(const TaskSpec& task, const TimeSeries& x)
{
    task.validate();
    switch (task.kind) {
    case TaskKind::Filter:
        return task1_target(x, task.m, task.a, task.b, task.c);
    case TaskKind::Predict:
        return task2_target(x, task.m);
    case TaskKind::MultiSineFilter:
        return task1_target(x, task.filter_m, task.a, task.b, task.c);
    }
    throw ConfigError("unknown task kind");
}

} // namespace krc
