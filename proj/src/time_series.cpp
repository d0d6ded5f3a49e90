#include "krc/time_series.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace krc {

namespace {

constexpr double kGridSlack = 1e-9;

std::vector<std::string> default_names(Eigen::Index n)
{
    std::vector<std::string> names;
    for (Eigen::Index c = 0; c < n; ++c) {
        names.push_back(n == 1 ? std::string("x") : "y" + std::to_string(c + 1));
    }
    return names;
}

} // namespace

TimeSeries::TimeSeries(double t0, double dt, Eigen::MatrixXd values, std::vector<std::string> channels)
    : t0_(t0), dt_(dt), values_(std::move(values)), names_(std::move(channels))
{
    if (!(dt_ > 0.0) || !std::isfinite(dt_) || !std::isfinite(t0_)) {
        throw ConfigError("time series needs finite t0 and dt > 0");
    }
    if (!values_.allFinite()) {
        throw ConfigError("time series contains non-finite values");
    }
    if (names_.empty()) {
        names_ = default_names(values_.cols());
    } else if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw ConfigError("channel name count does not match column count");
    }
}

double TimeSeries::at(double t, Eigen::Index channel) const
{
    if (samples() == 0) {
        throw RangeError("lookup in empty time series");
    }
    const double u = (t - t0_) / dt_;
    const double last = static_cast<double>(samples() - 1);
    if (!(u >= -kGridSlack) || !(u <= last + kGridSlack)) {
        std::ostringstream msg;
        msg << "time " << t << " outside series range [" << t0_ << ", " << t_end() << "]";
        throw RangeError(msg.str());
    }
    double clamped = std::clamp(u, 0.0, last);
    if (std::abs(clamped - std::round(clamped)) < kGridSlack) {
        clamped = std::round(clamped);
    }
    const auto k = static_cast<Eigen::Index>(std::floor(clamped));
    if (k >= samples() - 1) {
        return values_(samples() - 1, channel);
    }
    const double frac = clamped - static_cast<double>(k);
    return (1.0 - frac) * values_(k, channel) + frac * values_(k + 1, channel);
}

Eigen::Index TimeSeries::index_of(double t) const
{
    const double u = (t - t0_) / dt_;
    const double k = std::round(u);
    if (std::abs(u - k) > 1e-6 || k < 0.0 || k > static_cast<double>(samples() - 1)) {
        std::ostringstream msg;
        msg << "time " << t << " is not a sample time of the series";
        throw RangeError(msg.str());
    }
    return static_cast<Eigen::Index>(k);
}

TimeSeries TimeSeries::slice(double from, double to) const
{
    const auto first = static_cast<Eigen::Index>(std::ceil((from - t0_) / dt_ - kGridSlack));
    const auto last = static_cast<Eigen::Index>(std::floor((to - t0_) / dt_ + kGridSlack));
    const Eigen::Index lo = std::max<Eigen::Index>(first, 0);
    const Eigen::Index hi = std::min<Eigen::Index>(last, samples() - 1);
    if (hi < lo) {
        throw RangeError("empty slice");
    }
    return TimeSeries(time_at(lo), dt_, values_.middleRows(lo, hi - lo + 1), names_);
}

void write_csv(std::ostream& os, const TimeSeries& series)
{
    os << std::setprecision(17);
    os << "# t0=" << series.t0() << " dt=" << series.dt() << '\n';
    os << 't';
    for (const auto& name : series.channel_names()) {
        os << ',' << name;
    }
    os << '\n';
    for (Eigen::Index k = 0; k < series.samples(); ++k) {
        os << series.time_at(k);
        for (Eigen::Index c = 0; c < series.channels(); ++c) {
            os << ',' << series.values()(k, c);
        }
        os << '\n';
    }
}

TimeSeries read_csv(std::istream& is)
{
    std::string line;
    double t0 = std::numeric_limits<double>::quiet_NaN();
    double dt = std::numeric_limits<double>::quiet_NaN();
    if (!std::getline(is, line) || line.rfind('#', 0) != 0) {
        throw ConfigError("series CSV must start with \"# t0=<t0> dt=<dt>\"");
    }
    {
        std::istringstream meta(line.substr(1));
        std::string token;
        while (meta >> token) {
            if (token.rfind("t0=", 0) == 0) {
                t0 = std::stod(token.substr(3));
            } else if (token.rfind("dt=", 0) == 0) {
                dt = std::stod(token.substr(3));
            }
        }
    }
    if (!std::getline(is, line)) {
        throw ConfigError("series CSV missing header row");
    }
    std::vector<std::string> names;
    {
        std::istringstream header(line);
        std::string cell;
        std::getline(header, cell, ',');
        while (std::getline(header, cell, ',')) {
            names.push_back(cell);
        }
    }
    if (names.empty()) {
        throw ConfigError("series CSV has no channels");
    }
    std::vector<double> flat;
    Eigen::Index rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            flat.push_back(std::stod(cell));
            ++count;
        }
        if (count != names.size()) {
            throw ConfigError("series CSV row has wrong number of cells: " + line);
        }
        ++rows;
    }
    Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(names.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            values(r, c) = flat[static_cast<std::size_t>(r * values.cols() + c)];
        }
    }
    return TimeSeries(t0, dt, std::move(values), std::move(names));
}

} // namespace krc
