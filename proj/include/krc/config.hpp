#pragma once

// Flat, sectioned key-value configuration ("[section]" headers, "key = value"
// lines, '#' comments) and the experiment configuration built on top of it.

#include "krc/order_params.hpp"
#include "krc/reservoir.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace krc {

class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& is);
    static KeyValueConfig parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    /// Keys are "section.name".
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Sections in sorted order, keys sorted within each section.
    void write(std::ostream& os) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    bool operator==(const KeyValueConfig&) const = default;

private:
    std::map<std::string, std::string> values_;
};

enum class ModelKind { RS, ES };

ModelKind parse_model(const std::string& name);
const char* to_string(ModelKind m);

/// Inclusive range "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);
std::string format_grid(const std::vector<double>& grid);
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct ExperimentConfig {
    ModelKind model = ModelKind::RS;
    std::size_t n = 200;
    /// Erdos-Renyi mean degree for ES.
    double mean_degree = 6.0;
    /// Use the topology of the other model (RS on ER, ES on complete graph).
    bool swap_topology = false;

    std::vector<double> lambda_grid = make_grid(0.0, 5.0, 0.1);
    /// Resolve lambda per seed from an order sweep instead of using the grid
    /// ("sweep.lambda = critical").
    bool critical_lambda = false;
    SweepProtocol sweep;

    TaskSpec task;
    ReadoutConfig readout;
    double ridge = 1e-8;
    DataSplit split{800, 1000};
    RelaxOptions relax;
    InputProtocol input;
    double sample_dt = 0.1;

    std::vector<std::uint64_t> seeds{1, 2, 3};
    unsigned workers = 0;
    std::string output_dir = "results";

    /// Throws ConfigError when any sub-configuration is invalid.
    void validate() const;

    KeyValueConfig to_key_values() const;
    static ExperimentConfig from_key_values(const KeyValueConfig& kv);
};

/// Network, frequencies and reservoir spec for one seed. The seed drives the
/// frequencies, the graph, the initial phases and the task signal through
/// fixed offsets.
struct SeededSetup {
    std::shared_ptr<const NetworkSpec> net;
    NaturalFrequencies omega;
    CouplingVariant variant = CouplingVariant::Regular;
};

SeededSetup make_setup(const ExperimentConfig& cfg, std::uint64_t seed);
ReservoirSpec make_reservoir_spec(const ExperimentConfig& cfg, const SeededSetup& setup, double lambda,
                                  std::uint64_t seed);
TaskSpec seeded_task(const TaskSpec& task, std::uint64_t seed);

} // namespace krc
