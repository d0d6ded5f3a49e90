#include "krc/readout.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace krc {

namespace {

long long integer_ratio(double num, double den)
{
    const double ratio = num / den;
    const long long r = std::llround(ratio);
    if (r < 1 || std::abs(ratio - static_cast<double>(r)) > 1e-9 * ratio) {
        return 0;
    }
    return r;
}

} // namespace

void ReadoutConfig::validate(double sample_dt) const
{
    if (s < 1) {
        throw ConfigError("readout needs s >= 1");
    }
    if (!(delta_t > 0.0) || integer_ratio(delta_t, sample_dt) == 0) {
        std::ostringstream msg;
        msg << "readout spacing " << delta_t << " is not a positive multiple of the sample interval " << sample_dt;
        throw ConfigError(msg.str());
    }
}

Eigen::MatrixXd build_features(const FrequencyHistory& history, const ReadoutConfig& cfg,
                               std::span<const double> eval_times, std::span<const std::size_t> nodes)
{
    cfg.validate(history.sample_dt);
    const long long stride = integer_ratio(cfg.delta_t, history.sample_dt);
    const auto rows = static_cast<Eigen::Index>(eval_times.size());
    const auto cols = static_cast<Eigen::Index>(nodes.size()) * cfg.s;
    for (auto i : nodes) {
        if (static_cast<Eigen::Index>(i) >= history.freq.cols()) {
            throw ConfigError("feature node index out of range");
        }
    }

    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double t = eval_times[static_cast<std::size_t>(r)];
        const double u = (t - history.t0) / history.sample_dt;
        const long long k = std::llround(u);
        if (std::abs(u - static_cast<double>(k)) > 1e-6) {
            std::ostringstream msg;
            msg << "evaluation time " << t << " is off the sampling grid";
            throw RangeError(msg.str());
        }
        const long long first = k - stride * cfg.s;
        if (first < 0 || k > history.samples() - 1) {
            std::ostringstream msg;
            msg << "history [" << history.t0 << ", " << history.t_end() << "] does not cover the taps of t=" << t;
            throw RangeError(msg.str());
        }
        Eigen::Index c = 0;
        for (auto i : nodes) {
            for (int j = 1; j <= cfg.s; ++j) {
                const auto idx = static_cast<Eigen::Index>(k - stride * j);
                out(r, c++) = history.freq(idx, static_cast<Eigen::Index>(i));
            }
        }
    }
    return out;
}

Eigen::MatrixXd build_features(const FrequencyHistory& history, const ReadoutConfig& cfg,
                               std::span<const double> eval_times)
{
    std::vector<std::size_t> all(static_cast<std::size_t>(history.freq.cols()));
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return build_features(history, cfg, eval_times, all);
}

LeastSquaresFit solve_ridge(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, double ridge)
{
    if (features.rows() != targets.rows()) {
        throw ConfigError("feature and target row counts differ");
    }
    if (features.rows() == 0 || features.cols() == 0) {
        throw ConfigError("empty least-squares system");
    }
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
        throw ConfigError("ridge must be finite and non-negative");
    }
    const Eigen::Index m = features.rows();
    const Eigen::Index p = features.cols();
    LeastSquaresFit fit;

    if (ridge == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(features);
        fit.coefficients = cod.solve(targets);
        const Eigen::Index rank = cod.rank();
        fit.rank_deficient = rank < std::min(m, p);
        if (rank == 0) {
            fit.condition_estimate = std::numeric_limits<double>::infinity();
        } else {
            const Eigen::VectorXd diag = cod.matrixQTZ().diagonal().head(rank).cwiseAbs();
            fit.condition_estimate = diag.maxCoeff() / diag.minCoeff();
        }
        if (fit.rank_deficient) {
            fit.condition_estimate = std::max(fit.condition_estimate, 1.0 / cod.threshold());
        }
        return fit;
    }

    const double shift = static_cast<double>(m) * ridge;
    if (p <= m) {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(features.transpose());
        gram.diagonal().array() += shift;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram.selfadjointView<Eigen::Lower>());
        fit.coefficients = ldlt.solve(features.transpose() * targets);
        fit.condition_estimate = 1.0 / ldlt.rcond();
    } else {
        // Dual form: W = X^T (X X^T + M ridge I)^{-1} Y.
        Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(m, m);
        kernel.selfadjointView<Eigen::Lower>().rankUpdate(features);
        kernel.diagonal().array() += shift;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(kernel.selfadjointView<Eigen::Lower>());
        fit.coefficients = features.transpose() * ldlt.solve(targets);
        fit.condition_estimate = 1.0 / ldlt.rcond();
    }
    return fit;
}

Eigen::MatrixXd ReadoutModel::predict(const Eigen::MatrixXd& features) const
{
    if (features.cols() != weights.cols()) {
        throw ConfigError("feature width does not match the readout weights");
    }
    return features * weights.transpose();
}

ReadoutModel fit(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, double ridge,
                 const ReadoutConfig& cfg)
{
    const LeastSquaresFit ls = solve_ridge(features, targets, ridge);
    ReadoutModel model;
    model.config = cfg;
    model.weights = ls.coefficients.transpose();
    model.ridge = ridge;
    model.condition_estimate = ls.condition_estimate;
    return model;
}

double mean_squared_error(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& targets)
{
    if (predicted.rows() != targets.rows() || predicted.cols() != targets.cols()) {
        throw ConfigError("prediction and target shapes differ");
    }
    if (targets.rows() == 0) {
        throw ConfigError("mean squared error of an empty set");
    }
    return (predicted - targets).squaredNorm() / static_cast<double>(targets.rows());
}

double evaluate(const ReadoutModel& model, const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets)
{
    return mean_squared_error(model.predict(features), targets);
}

void save_model(std::ostream& os, const ReadoutModel& model)
{
    os << std::setprecision(17);
    os << "# kuramoto-rc readout v1\n";
    os << "# s=" << model.config.s << " delta_t=" << model.config.delta_t << " ordering=i-major"
       << " include_input_nodes=" << (model.config.include_input_nodes ? 1 : 0) << " ridge=" << model.ridge
       << " seed=" << model.seed << " outputs=" << model.weights.rows() << " features=" << model.weights.cols()
       << '\n';
    os << "# nodes=";
    for (std::size_t k = 0; k < model.nodes.size(); ++k) {
        os << (k ? "," : "") << model.nodes[k];
    }
    os << '\n';
    for (Eigen::Index r = 0; r < model.weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.weights.cols(); ++c) {
            os << (c ? "," : "") << model.weights(r, c);
        }
        os << '\n';
    }
}

ReadoutModel load_model(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("# kuramoto-rc readout", 0) != 0) {
        throw ConfigError("not a readout weight file");
    }
    ReadoutModel model;
    Eigen::Index outputs = -1;
    Eigen::Index features = -1;
    if (!std::getline(is, line) || line.rfind('#', 0) != 0) {
        throw ConfigError("readout weight file missing metadata line");
    }
    {
        std::istringstream meta(line.substr(1));
        std::string token;
        while (meta >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            const std::string key = token.substr(0, eq);
            const std::string val = token.substr(eq + 1);
            if (key == "s") {
                model.config.s = std::stoi(val);
            } else if (key == "delta_t") {
                model.config.delta_t = std::stod(val);
            } else if (key == "ordering" && val != "i-major") {
                throw ConfigError("unsupported feature ordering " + val);
            } else if (key == "include_input_nodes") {
                model.config.include_input_nodes = val == "1";
            } else if (key == "ridge") {
                model.ridge = std::stod(val);
            } else if (key == "seed") {
                model.seed = std::stoull(val);
            } else if (key == "outputs") {
                outputs = std::stol(val);
            } else if (key == "features") {
                features = std::stol(val);
            }
        }
    }
    if (!std::getline(is, line) || line.rfind("# nodes=", 0) != 0) {
        throw ConfigError("readout weight file missing node list");
    }
    {
        std::istringstream nodes(line.substr(8));
        std::string cell;
        while (std::getline(nodes, cell, ',')) {
            if (!cell.empty()) {
                model.nodes.push_back(std::stoul(cell));
            }
        }
    }
    if (outputs < 0 || features < 0) {
        throw ConfigError("readout weight file missing dimensions");
    }
    model.weights.resize(outputs, features);
    for (Eigen::Index r = 0; r < outputs; ++r) {
        if (!std::getline(is, line)) {
            throw ConfigError("readout weight file truncated");
        }
        std::istringstream row(line);
        std::string cell;
        Eigen::Index c = 0;
        while (std::getline(row, cell, ',')) {
            if (c >= features) {
                throw ConfigError("readout weight row too long");
            }
            model.weights(r, c++) = std::stod(cell);
        }
        if (c != features) {
            throw ConfigError("readout weight row too short");
        }
    }
    return model;
}

} // namespace krc
