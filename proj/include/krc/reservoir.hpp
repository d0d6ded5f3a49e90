#pragma once

// End-to-end reservoir experiment: relax the network to its ground state,
// clamp an input oscillator to the task signal, record frequencies, fit the
// readout on the training span and score it on the test span.

#include "krc/dynamics.hpp"
#include "krc/order_params.hpp"
#include "krc/readout.hpp"
#include "krc/signals.hpp"

#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace krc {

struct DataSplit {
    /// Training evaluation times are 1, 2, ..., train_end; test times follow up to test_end.
    int train_end = 4000;
    int test_end = 5000;

    void validate() const;
};

struct InputProtocol {
    /// Training-window min/max of x are mapped to -span/2 and +span/2.
    double phase_span = std::numbers::pi;
    /// Advance the clamp with the ground state's mean frequency, centred on
    /// its mean phase, so the drive is stationary relative to the cluster.
    bool co_rotating = true;
};

struct ReservoirSpec {
    std::shared_ptr<const NetworkSpec> net;
    NaturalFrequencies omega;
    CouplingScheme coupling;
    ReadoutConfig readout;
    DataSplit split;
    RelaxOptions relax;
    InputProtocol input;
    double ridge = 1e-8;
    double sample_dt = 0.1;
    /// Seed of the initial phases.
    std::uint64_t seed = 0;
    /// Undriven span after relaxation over which r and r_var of the ground
    /// state are measured.
    VarianceConfig ground;
};

/// Index of the oscillator with the median |omega| (lower median).
std::size_t median_frequency_node(std::span<const double> omega);

struct ReservoirRun {
    FrequencyHistory history;
    std::shared_ptr<const TimeSeries> input;
    std::vector<std::size_t> input_nodes;
    std::vector<std::size_t> feature_nodes;
    bool locked = false;
    double r_ground = 0.0;
    double r_var_ground = 0.0;
    double mean_frequency = 0.0;
};

/// Signal for a task covering the drive span [0, test_end] plus a margin on
/// both sides for target lags, sampled at dt.
TimeSeries experiment_input(const TaskSpec& task, const DataSplit& split, double dt = kDefaultDt);

/// Simulates the reservoir under the given input (which must cover
/// [0, test_end]). Failure to lock is recorded, not raised.
ReservoirRun run_reservoir(const ReservoirSpec& spec, std::shared_ptr<const TimeSeries> input);

struct FitReport {
    double train_mse = 0.0;
    double test_mse = 0.0;
    double condition_estimate = 1.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    bool locked = false;
    double r = 0.0;
    double r_var = 0.0;
};

/// Fits one readout per task on a shared simulation. All tasks must derive
/// their input from run.input. When models is non-null, the fitted readouts
/// are stored there.
std::vector<FitReport> fit_tasks(const ReservoirRun& run, const ReservoirSpec& spec, std::span<const TaskSpec> tasks,
                                 double ridge, std::vector<ReadoutModel>* models = nullptr);

/// Full pipeline for one task.
FitReport run_experiment(const ReservoirSpec& spec, const TaskSpec& task, ReadoutModel* model = nullptr);

} // namespace krc
