#pragma once

// Linear (s, delta_t)-type readout over sampled oscillator frequencies:
//
//   f^l(t) = sum_i sum_{j=1..s} w^l_{i,j} theta_i'(t - j delta_t)
//
// fitted by ridge-regularized least squares on the mean squared error.

#include "krc/dynamics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace krc {

struct ReadoutConfig {
    int s = 10;
    double delta_t = 0.1;
    bool include_input_nodes = false;

    /// Throws ConfigError unless s >= 1 and delta_t is a positive integer
    /// multiple of sample_dt.
    void validate(double sample_dt) const;
};

/// One row per evaluation time t holding theta_i'(t - j delta_t) for every
/// listed oscillator i and tap j = 1..s, i-major then j. RangeError if the
/// history does not cover [min t - s delta_t, max t] on its sample grid.
Eigen::MatrixXd build_features(const FrequencyHistory& history, const ReadoutConfig& cfg,
                               std::span<const double> eval_times, std::span<const std::size_t> nodes);

/// Same, over all oscillators.
Eigen::MatrixXd build_features(const FrequencyHistory& history, const ReadoutConfig& cfg,
                               std::span<const double> eval_times);

struct LeastSquaresFit {
    /// features x outputs.
    Eigen::MatrixXd coefficients;
    /// Ratio of extreme singular values (ridge = 0) or 1 / rcond of the
    /// regularized system.
    double condition_estimate = 1.0;
    /// The system was rank deficient; the minimum-norm solution was taken.
    bool rank_deficient = false;
};

/// Minimizes (1/M) ||Y - X W||_F^2 + ridge ||W||_F^2. For ridge > 0 it
/// factors whichever of X^T X + M ridge I and X X^T + M ridge I is smaller
/// (LDLT); for ridge = 0 it returns the minimum-norm least-squares solution
/// via a complete orthogonal decomposition.
LeastSquaresFit solve_ridge(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, double ridge);

struct ReadoutModel {
    ReadoutConfig config;
    /// outputs x (nodes * s), i-major feature ordering.
    Eigen::MatrixXd weights;
    double ridge = 0.0;
    double condition_estimate = 1.0;
    std::vector<std::size_t> nodes;
    std::uint64_t seed = 0;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& features) const;
};

/// Fits a readout; rows of features and targets are evaluation times.
ReadoutModel fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, double ridge,
                 const ReadoutConfig& cfg = {});

/// (1/M) sum_i ||y(t_i) - f(t_i)||^2.
double mean_squared_error(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& targets);
double evaluate(const ReadoutModel& model, const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets);

/// Weight file: comment lines carrying s, delta_t, ordering, ridge, seed and
/// node list, then one CSV row of weights per output.
void save_model(std::ostream& os, const ReadoutModel& model);
ReadoutModel load_model(std::istream& is);

} // namespace krc
