#pragma once

// Networked Kuramoto dynamics
//
//   theta_i' = omega_i + (lambda_i / k_i) * sum_j A_ij sin(theta_j - theta_i)
//
// with lambda_i = lambda (regular synchronization) or lambda * |omega_i|
// (explosive synchronization), integrated by fixed-step RK4.

#include "krc/time_series.hpp"
#include "krc/topology.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace krc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default RK4 step. Divides the 0.1 readout spacing.
inline constexpr double kDefaultDt = 0.01;

/// Reduces an angle to [0, 2*pi).
double wrap_phase(double theta);

struct NaturalFrequencies {
    std::vector<double> omega;

    /// omega_i ~ N(0, 1), seeded.
    static NaturalFrequencies sample_normal(std::size_t n, std::uint64_t seed);

    std::size_t size() const { return omega.size(); }
};

enum class CouplingVariant { Regular, Explosive };

struct CouplingScheme {
    CouplingVariant variant = CouplingVariant::Regular;
    /// Global coupling scale. Zero is accepted as the uncoupled end of a sweep.
    double lambda = 1.0;

    /// Per-node lambda_i. Throws ConfigError for negative or non-finite lambda.
    std::vector<double> node_coupling(std::span<const double> omega) const;
};

struct OscillatorState {
    double t = 0.0;
    std::vector<double> theta;
    std::vector<double> dtheta;
};

/// Clamps a set of oscillators to a scalar drive:
///
///   theta_p(t) = scale * x(t) + offset + frame_rate * (t - frame_t0)   (mod 2*pi)
///
/// With frame_rate = 0 this is the plain affine clamp. A nonzero frame_rate
/// lets the clamp co-rotate with a locked cluster.
struct InputBinding {
    std::vector<std::size_t> nodes;
    std::shared_ptr<const TimeSeries> drive;
    double scale = 1.0;
    double offset = 0.0;
    double frame_rate = 0.0;
    double frame_t0 = 0.0;

    /// Unwrapped clamp phase. Throws RangeError outside the drive's range.
    double phase_at(double t) const;
    /// Time derivative of phase_at, by symmetric difference on the drive grid.
    double frequency_at(double t) const;

    /// Throws ConfigError unless p >= 1, indices are in [0, n) and distinct,
    /// and a drive is attached.
    void validate(std::size_t n) const;
};

/// A network, its natural frequencies and a coupling scheme, with the
/// per-node gains lambda_i / k_i precomputed.
class KuramotoSystem {
public:
    KuramotoSystem(std::shared_ptr<const NetworkSpec> net, NaturalFrequencies omega, CouplingScheme coupling);

    std::size_t size() const { return net_->size(); }
    const NetworkSpec& network() const { return *net_; }
    std::shared_ptr<const NetworkSpec> network_ptr() const { return net_; }
    std::span<const double> omega() const { return omega_.omega; }
    const CouplingScheme& coupling() const { return coupling_; }
    std::span<const double> gains() const { return gain_; }

    /// Evaluates the right-hand side into out. sin_buf and cos_buf are scratch
    /// of length size().
    void rhs(std::span<const double> theta, std::span<double> out, std::span<double> sin_buf,
             std::span<double> cos_buf) const;

    std::vector<double> rhs(std::span<const double> theta) const;

    /// Right-hand side from precomputed sin(theta_j), cos(theta_j).
    void rhs_from_trig(std::span<const double> sin_theta, std::span<const double> cos_theta,
                       std::span<double> out) const;

private:
    std::shared_ptr<const NetworkSpec> net_;
    NaturalFrequencies omega_;
    CouplingScheme coupling_;
    std::vector<double> gain_;
};

/// Convenience one-shot evaluation of the right-hand side.
std::vector<double> kuramoto_rhs(std::span<const double> theta, const NetworkSpec& net,
                                 std::span<const double> omega, const CouplingScheme& coupling);

/// Fixed-step RK4 with reusable workspace. Clamped nodes follow the binding at
/// every stage time and report the clamp's time derivative as their frequency.
class Integrator {
public:
    Integrator(const KuramotoSystem& system, double dt, const InputBinding* binding = nullptr);

    double dt() const { return dt_; }

    /// Advances state by one step in place: phases wrapped, dtheta refreshed.
    void step(OscillatorState& state);

    /// Refreshes state.dtheta (and clamped phases) for the current state.t.
    void refresh(OscillatorState& state);

private:
    void apply_clamp(std::span<double> theta, double t) const;
    void eval(std::span<const double> theta, double t, std::span<double> out);
    void eval_stage(const std::vector<double>& k, double coef, double t, std::vector<double>& out);
    void finish_eval(double t, std::span<double> out);

    const KuramotoSystem* system_;
    const InputBinding* binding_;
    double dt_;
    // sin_/cos_ hold the trig values at the start of the current step.
    std::vector<double> k1_, k2_, k3_, k4_, sin_, cos_, stage_sin_, stage_cos_, rot_sin_, rot_cos_;
    const OscillatorState* fresh_for_ = nullptr;
    double fresh_t_ = 0.0;
};

/// Initial state with phases as given and frequencies evaluated at t.
OscillatorState make_state(const KuramotoSystem& system, std::vector<double> theta, double t = 0.0);

/// Uniform phases on [0, 2*pi), seeded.
std::vector<double> random_phases(std::size_t n, std::uint64_t seed);

/// One RK4 step returning the new state.
OscillatorState step_rk4(const OscillatorState& state, double dt, const KuramotoSystem& system,
                         const InputBinding* binding = nullptr);

/// Max over i of |theta_i' - mean(theta')|.
double frequency_spread(std::span<const double> dtheta);

struct RelaxOptions {
    double t_max = 200.0;
    double tol = 1e-6;
    double dt = kDefaultDt;
};

struct RelaxResult {
    OscillatorState state;
    bool locked = false;
};

/// Integrates without input until the frequency spread drops below tol
/// (locked) or t_max elapses.
RelaxResult relax_to_locked(const KuramotoSystem& system, std::vector<double> init_phases,
                            const RelaxOptions& options = {});
RelaxResult relax_to_locked(const KuramotoSystem& system, OscillatorState state, const RelaxOptions& options = {});

/// Frequencies (and the order parameter r) sampled on a uniform grid.
/// Row k of freq is theta'(t0 + k * sample_dt); columns are oscillators.
struct FrequencyHistory {
    double t0 = 0.0;
    double sample_dt = 0.1;
    Eigen::MatrixXd freq;
    std::vector<double> r;

    Eigen::Index samples() const { return freq.rows(); }
    double t_end() const { return t0 + sample_dt * static_cast<double>(samples() > 0 ? samples() - 1 : 0); }
};

/// Integrates for duration from state (updated in place) and samples every
/// sample_dt, including the initial point; a zero duration yields an empty
/// history. sample_dt must be an integer multiple of dt (ConfigError).
FrequencyHistory run_driven(OscillatorState& state, const KuramotoSystem& system, const InputBinding* binding,
                            double duration, double sample_dt, double dt = kDefaultDt);

} // namespace krc
