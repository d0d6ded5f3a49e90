#pragma once

// Synchronization measures and adiabatic coupling sweeps.

#include "krc/dynamics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace krc {

/// |(1/N) sum_j exp(i theta_j)|.
double kuramoto_r(std::span<const double> phases);

struct VarianceConfig {
    /// Sensitivity constant in exp(-c var_j).
    double c = 1e7;
    /// Trailing duration over which var_j is estimated.
    double window = 50.0;
    double sample_dt = 0.1;

    /// Throws ConfigError unless c > 0 and window spans at least 10 samples.
    void validate() const;
    Eigen::Index window_samples() const;
};

/// (1/N) sum_j exp(-c var_j), with var_j the population variance of column j
/// over the trailing window of freq (rows are samples).
double variance_r(const Eigen::MatrixXd& freq, const VarianceConfig& cfg);

enum class SweepDirection { Forward, Backward };

struct OrderParamSample {
    double lambda = 0.0;
    double r = 0.0;
    double r_var = 0.0;
    SweepDirection direction = SweepDirection::Forward;
};

struct SweepProtocol {
    double transient = 50.0;
    double measure = 50.0;
    double dt = kDefaultDt;
    VarianceConfig variance;
};

struct SweepOutcome {
    std::vector<OrderParamSample> samples;
    OscillatorState final_state;
};

/// Adiabatic sweep: the final state at each lambda seeds the next. lambda_grid
/// must be ascending; Backward traverses it from the top. Samples are returned
/// in traversal order.
SweepOutcome sweep(std::shared_ptr<const NetworkSpec> net, const NaturalFrequencies& omega,
                   CouplingVariant variant, std::span<const double> lambda_grid, SweepDirection direction,
                   OscillatorState initial, const SweepProtocol& protocol = {});

/// Uniform grid lo, lo + step, ..., hi (inclusive within rounding).
std::vector<double> make_grid(double lo, double hi, double step);

struct Jump {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    /// Signed change from lambda_lo to lambda_hi.
    double delta = 0.0;
    double midpoint() const { return 0.5 * (lambda_lo + lambda_hi); }
};

/// Largest |delta| between neighbours once (lambda, value) pairs are ordered by
/// lambda; ties go to the smaller lambda. Requires at least two points.
Jump largest_jump(std::span<const double> lambdas, std::span<const double> values);

/// Midpoint of the grid interval with the largest |delta r_var|, or nullopt
/// when that jump is below min_jump. Points with lambda <= 0 are ignored.
/// Requires >= 3 samples.
std::optional<double> detect_critical(std::span<const OrderParamSample> samples, double min_jump = 0.05);

/// Columns: direction,lambda,r,r_var,seed.
void write_sweep_csv(std::ostream& os, std::span<const OrderParamSample> samples, std::uint64_t seed,
                     bool header = true);

const char* to_string(SweepDirection d);

} // namespace krc
