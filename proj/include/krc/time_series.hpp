#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace krc {

/// Uniformly sampled signal: row k holds the sample at t0 + k * dt.
class TimeSeries {
public:
    TimeSeries() = default;
    /// Throws ConfigError for dt <= 0 or non-finite values.
    TimeSeries(double t0, double dt, Eigen::MatrixXd values, std::vector<std::string> channels = {});

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    double t_end() const { return t0_ + dt_ * static_cast<double>(samples() > 0 ? samples() - 1 : 0); }
    Eigen::Index samples() const { return values_.rows(); }
    Eigen::Index channels() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<std::string>& channel_names() const { return names_; }

    double time_at(Eigen::Index k) const { return t0_ + dt_ * static_cast<double>(k); }

    /// Linear interpolation between samples. Throws RangeError outside
    /// [t0, t_end] (a relative slack of 1e-9 sample is tolerated).
    double at(double t, Eigen::Index channel = 0) const;

    /// Index of the sample at exactly time t, or RangeError if t is off-grid
    /// or out of range.
    Eigen::Index index_of(double t) const;

    /// Samples with t in [from, to], inclusive.
    TimeSeries slice(double from, double to) const;

private:
    double t0_ = 0.0;
    double dt_ = 1.0;
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
};

/// CSV layout: "# t0=<t0> dt=<dt>" comment, header "t,<ch1>,<ch2>,...", then rows.
void write_csv(std::ostream& os, const TimeSeries& series);
TimeSeries read_csv(std::istream& is);

} // namespace krc
