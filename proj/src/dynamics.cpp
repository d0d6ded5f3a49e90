#include "krc/dynamics.hpp"

#include "krc/error.hpp"
#include "krc/order_params.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace krc {

double wrap_phase(double theta)
{
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2*pi.
    return w >= kTwoPi ? 0.0 : w;
}

NaturalFrequencies NaturalFrequencies::sample_normal(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    NaturalFrequencies f;
    f.omega.resize(n);
    for (auto& w : f.omega) {
        w = normal(rng);
    }
    return f;
}

std::vector<double> CouplingScheme::node_coupling(std::span<const double> omega) const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        std::ostringstream msg;
        msg << "coupling strength must be finite and non-negative, got " << lambda;
        throw ConfigError(msg.str());
    }
    std::vector<double> out(omega.size(), lambda);
    if (variant == CouplingVariant::Explosive) {
        for (std::size_t i = 0; i < omega.size(); ++i) {
            out[i] = lambda * std::abs(omega[i]);
        }
    }
    return out;
}

double InputBinding::phase_at(double t) const
{
    return scale * drive->at(t) + offset + frame_rate * (t - frame_t0);
}

double InputBinding::frequency_at(double t) const
{
    const double h = drive->dt();
    const double lo = std::max(t - h, drive->t0());
    const double hi = std::min(t + h, drive->t_end());
    const double slope = hi > lo ? (drive->at(hi) - drive->at(lo)) / (hi - lo) : 0.0;
    return scale * slope + frame_rate;
}

void InputBinding::validate(std::size_t n) const
{
    if (nodes.empty()) {
        throw ConfigError("input binding needs at least one node");
    }
    if (!drive) {
        throw ConfigError("input binding has no drive signal");
    }
    std::vector<std::size_t> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ConfigError("input binding node indices must be distinct");
    }
    if (sorted.back() >= n) {
        throw ConfigError("input binding node index out of range");
    }
}

KuramotoSystem::KuramotoSystem(std::shared_ptr<const NetworkSpec> net, NaturalFrequencies omega,
                               CouplingScheme coupling)
    : net_(std::move(net)), omega_(std::move(omega)), coupling_(coupling)
{
    if (!net_) {
        throw ConfigError("system needs a network");
    }
    if (omega_.size() != net_->size()) {
        throw ConfigError("natural frequency count does not match network size");
    }
    gain_ = coupling_.node_coupling(omega_.omega);
    for (std::size_t i = 0; i < gain_.size(); ++i) {
        gain_[i] /= net_->degree(i);
    }
}

void KuramotoSystem::rhs(std::span<const double> theta, std::span<double> out, std::span<double> sin_buf,
                         std::span<double> cos_buf) const
{
    for (std::size_t j = 0; j < size(); ++j) {
        sin_buf[j] = std::sin(theta[j]);
        cos_buf[j] = std::cos(theta[j]);
    }
    rhs_from_trig(sin_buf, cos_buf, out);
}

void KuramotoSystem::rhs_from_trig(std::span<const double> sin_theta, std::span<const double> cos_theta,
                                   std::span<double> out) const
{
    const std::size_t n = size();
    // sum_j sin(theta_j - theta_i) = cos(theta_i) * S_i - sin(theta_i) * C_i
    if (net_->is_complete()) {
        double s = 0.0;
        double c = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += sin_theta[j];
            c += cos_theta[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = omega_.omega[i] + gain_[i] * (cos_theta[i] * s - sin_theta[i] * c);
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        double c = 0.0;
        for (auto j : net_->neighbors(i)) {
            s += sin_theta[j];
            c += cos_theta[j];
        }
        out[i] = omega_.omega[i] + gain_[i] * (cos_theta[i] * s - sin_theta[i] * c);
    }
}

std::vector<double> KuramotoSystem::rhs(std::span<const double> theta) const
{
    std::vector<double> out(size());
    std::vector<double> sb(size());
    std::vector<double> cb(size());
    rhs(theta, out, sb, cb);
    return out;
}

std::vector<double> kuramoto_rhs(std::span<const double> theta, const NetworkSpec& net,
                                 std::span<const double> omega, const CouplingScheme& coupling)
{
    KuramotoSystem sys(std::make_shared<NetworkSpec>(net), NaturalFrequencies{{omega.begin(), omega.end()}},
                       coupling);
    return sys.rhs(theta);
}

namespace {

// Taylor series good to well below 1 ulp for |d| <= kRotateLimit.
constexpr double kRotateLimit = 0.25;

void rotation_table(std::span<const double> delta, std::span<double> sn, std::span<double> cs)
{
    const std::size_t n = delta.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = delta[i];
        const double d2 = d * d;
        sn[i] = d * (1.0 + d2 * (-1.0 / 6 + d2 * (1.0 / 120 + d2 * (-1.0 / 5040 + d2 * (1.0 / 362880
                 + d2 * (-1.0 / 39916800 + d2 * (1.0 / 6227020800.0)))))));
        cs[i] = 1.0 + d2 * (-0.5 + d2 * (1.0 / 24 + d2 * (-1.0 / 720 + d2 * (1.0 / 40320
                 + d2 * (-1.0 / 3628800 + d2 * (1.0 / 479001600.0 + d2 * (-1.0 / 87178291200.0)))))));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(delta[i]) > kRotateLimit) {
            sn[i] = std::sin(delta[i]);
            cs[i] = std::cos(delta[i]);
        }
    }
}

} // namespace

Integrator::Integrator(const KuramotoSystem& system, double dt, const InputBinding* binding)
    : system_(&system), binding_(binding), dt_(dt)
{
    if (!(dt > 0.0)) {
        throw ConfigError("integration step must be positive");
    }
    if (binding_ != nullptr) {
        binding_->validate(system.size());
    }
    const std::size_t n = system.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &sin_, &cos_, &stage_sin_, &stage_cos_, &rot_sin_, &rot_cos_}) {
        v->assign(n, 0.0);
    }
}

void Integrator::apply_clamp(std::span<double> theta, double t) const
{
    if (binding_ == nullptr) {
        return;
    }
    const double phase = binding_->phase_at(t);
    for (auto p : binding_->nodes) {
        theta[p] = phase;
    }
}

void Integrator::finish_eval(double t, std::span<double> out)
{
    if (binding_ != nullptr) {
        const double f = binding_->frequency_at(t);
        for (auto p : binding_->nodes) {
            out[p] = f;
        }
    }
}

void Integrator::eval(std::span<const double> theta, double t, std::span<double> out)
{
    system_->rhs(theta, out, sin_, cos_);
    finish_eval(t, out);
}

// Stage phases theta + coef * k evaluated by rotating the step-start trig values.
void Integrator::eval_stage(const std::vector<double>& k, double coef, double t, std::vector<double>& out)
{
    const std::size_t n = k.size();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = coef * k[i];
    }
    rotation_table(out, rot_sin_, rot_cos_);
    for (std::size_t i = 0; i < n; ++i) {
        stage_sin_[i] = sin_[i] * rot_cos_[i] + cos_[i] * rot_sin_[i];
        stage_cos_[i] = cos_[i] * rot_cos_[i] - sin_[i] * rot_sin_[i];
    }
    if (binding_ != nullptr) {
        const double phase = binding_->phase_at(t);
        const double ps = std::sin(phase);
        const double pc = std::cos(phase);
        for (auto p : binding_->nodes) {
            stage_sin_[p] = ps;
            stage_cos_[p] = pc;
        }
    }
    system_->rhs_from_trig(stage_sin_, stage_cos_, out);
    finish_eval(t, out);
}

void Integrator::refresh(OscillatorState& state)
{
    if (binding_ != nullptr) {
        apply_clamp(state.theta, state.t);
        for (auto p : binding_->nodes) {
            state.theta[p] = wrap_phase(state.theta[p]);
        }
    }
    state.dtheta.resize(state.theta.size());
    eval(state.theta, state.t, state.dtheta);
    fresh_for_ = &state;
    fresh_t_ = state.t;
}

void Integrator::step(OscillatorState& state)
{
    const std::size_t n = system_->size();
    const double t = state.t;
    const double h = dt_;
    auto& th = state.theta;

    // dtheta and sin_/cos_ left by the previous step (or refresh) give k1.
    if (fresh_for_ == &state && fresh_t_ == t && state.dtheta.size() == n) {
        std::copy(state.dtheta.begin(), state.dtheta.end(), k1_.begin());
    } else {
        apply_clamp(th, t);
        eval(th, t, k1_);
    }
    eval_stage(k1_, 0.5 * h, t + 0.5 * h, k2_);
    eval_stage(k2_, 0.5 * h, t + 0.5 * h, k3_);
    eval_stage(k3_, h, t + h, k4_);

    for (std::size_t i = 0; i < n; ++i) {
        th[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    state.t = t + h;
    apply_clamp(th, state.t);
    for (auto& x : th) {
        if (x < 0.0 || x >= kTwoPi) {
            x = wrap_phase(x);
        }
    }
    state.dtheta.resize(n);
    eval(th, state.t, state.dtheta);
    fresh_for_ = &state;
    fresh_t_ = state.t;
}

OscillatorState make_state(const KuramotoSystem& system, std::vector<double> theta, double t)
{
    if (theta.size() != system.size()) {
        throw ConfigError("phase vector length does not match network size");
    }
    OscillatorState s;
    s.t = t;
    s.theta = std::move(theta);
    for (auto& x : s.theta) {
        x = wrap_phase(x);
    }
    s.dtheta = system.rhs(s.theta);
    return s;
}

std::vector<double> random_phases(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, kTwoPi);
    std::vector<double> out(n);
    for (auto& x : out) {
        x = wrap_phase(unit(rng));
    }
    return out;
}

OscillatorState step_rk4(const OscillatorState& state, double dt, const KuramotoSystem& system,
                         const InputBinding* binding)
{
    if (state.theta.size() != system.size()) {
        throw ConfigError("state size does not match network size");
    }
    Integrator integ(system, dt, binding);
    OscillatorState next = state;
    integ.step(next);
    return next;
}

double frequency_spread(std::span<const double> dtheta)
{
    if (dtheta.empty()) {
        return 0.0;
    }
    double mean = 0.0;
    for (double f : dtheta) {
        mean += f;
    }
    mean /= static_cast<double>(dtheta.size());
    double spread = 0.0;
    for (double f : dtheta) {
        spread = std::max(spread, std::abs(f - mean));
    }
    return spread;
}

RelaxResult relax_to_locked(const KuramotoSystem& system, std::vector<double> init_phases,
                            const RelaxOptions& options)
{
    return relax_to_locked(system, make_state(system, std::move(init_phases)), options);
}

RelaxResult relax_to_locked(const KuramotoSystem& system, OscillatorState state, const RelaxOptions& options)
{
    if (!(options.t_max > 0.0) || !(options.tol > 0.0)) {
        throw ConfigError("relaxation needs t_max > 0 and tol > 0");
    }
    Integrator integ(system, options.dt);
    integ.refresh(state);
    const double t_stop = state.t + options.t_max;
    RelaxResult result;
    while (true) {
        if (frequency_spread(state.dtheta) < options.tol) {
            result.locked = true;
            break;
        }
        if (state.t + 0.5 * options.dt > t_stop) {
            break;
        }
        integ.step(state);
    }
    result.state = std::move(state);
    return result;
}

FrequencyHistory run_driven(OscillatorState& state, const KuramotoSystem& system, const InputBinding* binding,
                            double duration, double sample_dt, double dt)
{
    if (!(duration >= 0.0)) {
        throw ConfigError("duration must be non-negative");
    }
    if (!(sample_dt > 0.0) || !(dt > 0.0)) {
        throw ConfigError("sample interval and step must be positive");
    }
    const double ratio = sample_dt / dt;
    const auto stride = static_cast<long long>(std::llround(ratio));
    if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg << "sample interval " << sample_dt << " is not an integer multiple of the step " << dt;
        throw ConfigError(msg.str());
    }
    const double n_ratio = duration / sample_dt;
    const auto n_samples = static_cast<long long>(std::llround(n_ratio));
    if (std::abs(n_ratio - static_cast<double>(n_samples)) > 1e-9 * std::max(1.0, n_ratio)) {
        throw ConfigError("duration is not an integer multiple of the sample interval");
    }

    FrequencyHistory hist;
    hist.t0 = state.t;
    hist.sample_dt = sample_dt;
    if (n_samples == 0) {
        hist.freq.resize(0, static_cast<Eigen::Index>(system.size()));
        return hist;
    }

    Integrator integ(system, dt, binding);
    integ.refresh(state);
    const auto n = static_cast<Eigen::Index>(system.size());
    hist.freq.resize(n_samples + 1, n);
    hist.r.reserve(static_cast<std::size_t>(n_samples + 1));

    auto record = [&](Eigen::Index row) {
        hist.freq.row(row) = Eigen::Map<const Eigen::RowVectorXd>(state.dtheta.data(), n);
        hist.r.push_back(kuramoto_r(state.theta));
    };
    record(0);
    for (long long k = 1; k <= n_samples; ++k) {
        for (long long s = 0; s < stride; ++s) {
            integ.step(state);
        }
        record(k);
    }
    return hist;
}

} // namespace krc
