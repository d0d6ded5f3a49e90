#include "krc/order_params.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace krc {

double kuramoto_r(std::span<const double> phases)
{
    if (phases.empty()) {
        throw ConfigError("order parameter of an empty phase vector");
    }
    double c = 0.0;
    double s = 0.0;
    for (double th : phases) {
        c += std::cos(th);
        s += std::sin(th);
    }
    const double n = static_cast<double>(phases.size());
    return std::min(1.0, std::hypot(c, s) / n);
}

void VarianceConfig::validate() const
{
    if (!(c > 0.0)) {
        throw ConfigError("variance order parameter needs c > 0");
    }
    if (!(sample_dt > 0.0) || !(window >= 10.0 * sample_dt * (1.0 - 1e-9))) {
        throw ConfigError("variance window must span at least 10 sample intervals");
    }
}

Eigen::Index VarianceConfig::window_samples() const
{
    return static_cast<Eigen::Index>(std::llround(window / sample_dt));
}

double variance_r(const Eigen::MatrixXd& freq, const VarianceConfig& cfg)
{
    cfg.validate();
    const Eigen::Index w = cfg.window_samples();
    if (freq.rows() < w || freq.cols() == 0) {
        std::ostringstream msg;
        msg << "frequency history has " << freq.rows() << " samples, window needs " << w;
        throw ConfigError(msg.str());
    }
    const auto block = freq.bottomRows(w);
    const Eigen::RowVectorXd mean = block.colwise().mean();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
        const double var = (block.col(j).array() - mean(j)).square().mean();
        acc += std::exp(-cfg.c * var);
    }
    return acc / static_cast<double>(block.cols());
}

std::vector<double> make_grid(double lo, double hi, double step)
{
    if (!(step > 0.0) || !(hi >= lo)) {
        throw ConfigError("grid needs step > 0 and hi >= lo");
    }
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        // Rounded to 12 digits so 0.1-steps print as written.
        grid[static_cast<std::size_t>(k)] = std::round((lo + step * static_cast<double>(k)) * 1e12) / 1e12;
    }
    return grid;
}

SweepOutcome sweep(std::shared_ptr<const NetworkSpec> net, const NaturalFrequencies& omega,
                   CouplingVariant variant, std::span<const double> lambda_grid, SweepDirection direction,
                   OscillatorState initial, const SweepProtocol& protocol)
{
    if (lambda_grid.empty()) {
        throw ConfigError("sweep grid is empty");
    }
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
        throw ConfigError("sweep grid must be ascending");
    }
    protocol.variance.validate();
    if (protocol.measure + 1e-9 < protocol.variance.window) {
        throw ConfigError("measurement window shorter than the variance window");
    }

    std::vector<double> order(lambda_grid.begin(), lambda_grid.end());
    if (direction == SweepDirection::Backward) {
        std::reverse(order.begin(), order.end());
    }

    SweepOutcome out;
    OscillatorState state = std::move(initial);
    for (double lambda : order) {
        KuramotoSystem sys(net, omega, CouplingScheme{variant, lambda});
        if (protocol.transient > 0.0) {
            Integrator integ(sys, protocol.dt);
            integ.refresh(state);
            const auto steps = std::llround(protocol.transient / protocol.dt);
            for (long long k = 0; k < steps; ++k) {
                integ.step(state);
            }
        }
        const FrequencyHistory hist =
            run_driven(state, sys, nullptr, protocol.measure, protocol.variance.sample_dt, protocol.dt);
        OrderParamSample s;
        s.lambda = lambda;
        s.direction = direction;
        s.r = std::accumulate(hist.r.begin(), hist.r.end(), 0.0) / static_cast<double>(hist.r.size());
        s.r_var = variance_r(hist.freq, protocol.variance);
        out.samples.push_back(s);
    }
    out.final_state = std::move(state);
    return out;
}

Jump largest_jump(std::span<const double> lambdas, std::span<const double> values)
{
    if (lambdas.size() != values.size() || lambdas.size() < 2) {
        throw ConfigError("jump detection needs at least two matching points");
    }
    std::vector<std::size_t> idx(lambdas.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return lambdas[a] < lambdas[b]; });
    Jump best;
    bool have = false;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const double delta = values[idx[k + 1]] - values[idx[k]];
        if (!have || std::abs(delta) > std::abs(best.delta)) {
            best = {lambdas[idx[k]], lambdas[idx[k + 1]], delta};
            have = true;
        }
    }
    return best;
}

std::optional<double> detect_critical(std::span<const OrderParamSample> samples, double min_jump)
{
    if (samples.size() < 3) {
        throw ConfigError("critical-point detection needs at least 3 samples");
    }
    std::vector<double> lambdas;
    std::vector<double> rvar;
    for (const auto& s : samples) {
        // Uncoupled oscillators keep constant frequencies, so r_var is
        // trivially 1 at lambda = 0 and would fake a transition.
        if (s.lambda > 0.0) {
            lambdas.push_back(s.lambda);
            rvar.push_back(s.r_var);
        }
    }
    if (lambdas.size() < 2) {
        return std::nullopt;
    }
    const Jump j = largest_jump(lambdas, rvar);
    if (std::abs(j.delta) < min_jump) {
        return std::nullopt;
    }
    return j.midpoint();
}

const char* to_string(SweepDirection d)
{
    return d == SweepDirection::Forward ? "forward" : "backward";
}

void write_sweep_csv(std::ostream& os, std::span<const OrderParamSample> samples, std::uint64_t seed, bool header)
{
    if (header) {
        os << "direction,lambda,r,r_var,seed\n";
    }
    for (const auto& s : samples) {
        os << to_string(s.direction) << ',' << s.lambda << ',' << s.r << ',' << s.r_var << ',' << seed << '\n';
    }
}

} // namespace krc
