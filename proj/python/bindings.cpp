#include "krc/config.hpp"
#include "krc/experiments.hpp"
#include "krc/order_params.hpp"
#include "krc/readout.hpp"
#include "krc/reservoir.hpp"
#include "krc/signals.hpp"
#include "krc/topology.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace krc;

namespace {

py::dict report_dict(const FitReport& r)
{
    py::dict d;
    d["train_mse"] = r.train_mse;
    d["test_mse"] = r.test_mse;
    d["condition_estimate"] = r.condition_estimate;
    d["n_train"] = r.n_train;
    d["n_test"] = r.n_test;
    d["locked"] = r.locked;
    d["r"] = r.r;
    d["r_var"] = r.r_var;
    return d;
}

ExperimentConfig config_from_text(const std::string& text)
{
    std::istringstream is(text);
    return ExperimentConfig::from_key_values(KeyValueConfig::parse(is));
}

std::string config_to_text(const ExperimentConfig& c)
{
    std::ostringstream os;
    c.to_key_values().write(os);
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Kuramoto oscillator reservoir computing";

    py::class_<NetworkSpec>(m, "Network")
        .def_property_readonly("size", &NetworkSpec::size)
        .def_property_readonly("mean_degree", &NetworkSpec::mean_degree)
        .def_property_readonly("is_complete", &NetworkSpec::is_complete)
        .def("degrees", [](const NetworkSpec& n) { return std::vector<double>(n.degrees().begin(), n.degrees().end()); })
        .def("edges", &NetworkSpec::edges);
    m.def("complete_graph", &complete_graph, py::arg("n"));
    m.def("erdos_renyi", &erdos_renyi, py::arg("n"), py::arg("mean_degree"), py::arg("seed"));

    m.def(
        "kuramoto_r", [](const std::vector<double>& phases) { return kuramoto_r(phases); }, py::arg("phases"));
    m.def(
        "variance_r",
        [](const Eigen::MatrixXd& freq, double c, double window, double sample_dt) {
            VarianceConfig v;
            v.c = c;
            v.window = window;
            v.sample_dt = sample_dt;
            return variance_r(freq, v);
        },
        py::arg("freq"), py::arg("c") = 1e7, py::arg("window") = 50.0, py::arg("sample_dt") = 0.1,
        "freq has one row per sample and one column per oscillator.");

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<double, double, Eigen::MatrixXd>(), py::arg("t0"), py::arg("dt"), py::arg("values"))
        .def_property_readonly("t0", &TimeSeries::t0)
        .def_property_readonly("dt", &TimeSeries::dt)
        .def_property_readonly("t_end", &TimeSeries::t_end)
        .def_property_readonly("values", &TimeSeries::values)
        .def("at", &TimeSeries::at, py::arg("t"), py::arg("channel") = 0)
        .def("__len__", &TimeSeries::samples);
    m.def("lorenz_series", &lorenz_series, py::arg("duration"), py::arg("dt"), py::arg("seed"), py::arg("t0") = 0.0);
    m.def("mackey_glass_series", &mackey_glass_series, py::arg("duration"), py::arg("dt"), py::arg("seed"),
          py::arg("t0") = 0.0);
    m.def("multisine_series", py::overload_cast<double, double, int, std::uint64_t, double>(&multisine_series),
          py::arg("duration"), py::arg("dt"), py::arg("m"), py::arg("seed"), py::arg("t0") = 0.0);
    m.def("task1_target", &task1_target, py::arg("x"), py::arg("m"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def("task2_target", &task2_target, py::arg("x"), py::arg("m"));

    m.def(
        "solve_ridge",
        [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double ridge) {
            return solve_ridge(x, y, ridge).coefficients;
        },
        py::arg("features"), py::arg("targets"), py::arg("ridge"),
        "Minimizes ||y - X w||^2 / M + ridge ||w||^2; ridge = 0 gives the minimum-norm solution.");

    py::class_<ExperimentConfig>(m, "Config")
        .def(py::init<>())
        .def_static("from_text", &config_from_text, py::arg("text"))
        .def("to_text", &config_to_text)
        .def_property(
            "model", [](const ExperimentConfig& c) { return std::string(to_string(c.model)); },
            [](ExperimentConfig& c, const std::string& s) { c.model = parse_model(s); })
        .def_readwrite("n", &ExperimentConfig::n)
        .def_readwrite("mean_degree", &ExperimentConfig::mean_degree)
        .def_readwrite("lambda_grid", &ExperimentConfig::lambda_grid)
        .def_readwrite("ridge", &ExperimentConfig::ridge)
        .def_readwrite("seeds", &ExperimentConfig::seeds)
        .def_property(
            "task", [](const ExperimentConfig& c) { return std::string(to_string(c.task.kind)); },
            [](ExperimentConfig& c, const std::string& s) { c.task.kind = parse_task_kind(s); })
        .def_property(
            "m", [](const ExperimentConfig& c) { return c.task.m; }, [](ExperimentConfig& c, int m) { c.task.m = m; })
        .def_property(
            "split", [](const ExperimentConfig& c) { return std::make_pair(c.split.train_end, c.split.test_end); },
            [](ExperimentConfig& c, std::pair<int, int> s) { c.split = {s.first, s.second}; })
        .def("validate", &ExperimentConfig::validate);

    m.def(
        "order_sweep",
        [](const ExperimentConfig& cfg, std::uint64_t seed, bool backward) {
            std::vector<OrderParamSample> samples;
            {
                py::gil_scoped_release release;
                samples = order_sweeps(cfg, seed, backward);
            }
            py::list out;
            for (const auto& s : samples) {
                py::dict d;
                d["direction"] = to_string(s.direction);
                d["lambda"] = s.lambda;
                d["r"] = s.r;
                d["r_var"] = s.r_var;
                out.append(d);
            }
            return out;
        },
        py::arg("config"), py::arg("seed"), py::arg("backward") = false);

    m.def(
        "run",
        [](const ExperimentConfig& cfg, std::uint64_t seed, double lambda) {
            FitReport r;
            {
                py::gil_scoped_release release;
                cfg.validate();
                const SeededSetup setup = make_setup(cfg, seed);
                const ReservoirSpec spec = make_reservoir_spec(cfg, setup, lambda, seed);
                r = run_experiment(spec, seeded_task(cfg.task, seed));
            }
            return report_dict(r);
        },
        py::arg("config"), py::arg("seed"), py::arg("lambda_"),
        "Single reservoir run: relax, drive, fit the readout and report errors.");
}
