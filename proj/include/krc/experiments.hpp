#pragma once

// Experiment orchestration: order-parameter sweeps, error sweeps over
// coupling, task length, frequency modes and mean degree, and the figure
// presets built on them.

#include "krc/config.hpp"
#include "krc/order_params.hpp"
#include "krc/reservoir.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace krc {

/// Forward sweep from random phases over cfg.lambda_grid, then (optionally)
/// a backward sweep seeded with the forward end state.
std::vector<OrderParamSample> order_sweeps(const ExperimentConfig& cfg, std::uint64_t seed, bool backward = true);

/// Critical coupling from an order sweep: the first grid point at or past the
/// largest r_var jump, nullopt for a flat sweep.
std::optional<double> critical_lambda(const ExperimentConfig& cfg, std::uint64_t seed);

/// First grid point at or past the detected r_var transition of samples.
std::optional<double> critical_grid_point(std::span<const OrderParamSample> samples);

/// One record of an error sweep.
struct SweepRow {
    ModelKind model = ModelKind::RS;
    std::uint64_t seed = 0;
    TaskKind task = TaskKind::Filter;
    int m = 1;
    /// Name of the swept quantity ("lambda", "m", "modes", "mean_degree").
    std::string axis = "lambda";
    double value = 0.0;
    double lambda = 0.0;
    double ridge = 0.0;
    double r = 0.0;
    double r_var = 0.0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    bool locked = false;
    std::string error;
};

/// One simulation point: a model configuration (n, mean degree, ...), a seed,
/// a coupling (or cfg.critical_lambda) and the tasks read out from it.
struct PointJob {
    ExperimentConfig cfg;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    std::vector<TaskSpec> tasks;
    std::vector<double> ridges;
    std::string axis = "lambda";
    double value = 0.0;
};

/// Runs one point. Tasks sharing an input signal share one simulation.
/// Returns one row per (task, ridge).
std::vector<SweepRow> run_point(const PointJob& job);

/// Runs the jobs on cfg.workers threads. A failed job yields rows with the
/// error filled in and NaN measurements.
std::vector<SweepRow> run_points(const std::vector<PointJob>& jobs, unsigned workers);

/// Error vs lambda over cfg.lambda_grid for each seed.
std::vector<SweepRow> error_sweep(const ExperimentConfig& cfg, std::span<const TaskSpec> tasks,
                                  std::span<const double> ridges);
/// Error vs task length m.
std::vector<SweepRow> task_length_sweep(const ExperimentConfig& cfg, std::span<const int> lengths, double lambda);
/// Error vs number of multi-sine modes (cfg.task.kind is forced to multisine).
std::vector<SweepRow> modes_sweep(const ExperimentConfig& cfg, std::span<const int> modes, double lambda);
/// Error vs ER mean degree.
std::vector<SweepRow> degree_sweep(const ExperimentConfig& cfg, std::span<const double> degrees, double lambda);

/// Columns: model,seed,task,m,axis,value,lambda,ridge,r,r_var,train_mse,test_mse,locked,error.
/// Throws ConfigError if expected_rows is nonzero and differs from rows.size().
void write_rows_csv(std::ostream& os, std::span<const SweepRow> rows, std::size_t expected_rows = 0);

/// Order sweep CSV with a leading model column.
void write_order_csv(std::ostream& os, std::span<const OrderParamSample> samples, ModelKind model,
                     std::uint64_t seed, bool header);

/// Per-axis-value mean of a field over seeds, ordered by value.
struct Curve {
    std::vector<double> x;
    std::vector<double> y;
};
Curve mean_curve(std::span<const SweepRow> rows, double SweepRow::*field);

/// Value at which the curve is minimal (first on ties).
double argmin(const Curve& c);

enum class Scale { Desk, Full };
Scale parse_scale(const std::string& s);

/// Preset configuration for a figure at a given scale.
ExperimentConfig figure_preset(int fig, Scale scale);

struct FigureReport {
    int fig = 0;
    bool passed = false;
    /// One line per qualitative check.
    std::vector<std::string> checks;
    std::string csv;
    std::string svg;
    ExperimentConfig config;
};

/// Runs a figure preset and checks its qualitative claim. seeds overrides the
/// preset seeds when non-empty.
FigureReport reproduce_figure(int fig, Scale scale, std::span<const std::uint64_t> seeds, unsigned workers);

} // namespace krc
