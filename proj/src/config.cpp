#include "krc/config.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace krc {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return d;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

std::uint64_t mix(std::uint64_t x)
{
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum Stream : std::uint64_t { kFrequencies = 1, kGraph = 2, kPhases = 3, kSignal = 4 };

std::uint64_t derive(std::uint64_t seed, Stream s)
{
    return mix(seed * 8 + s);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& is)
{
    KeyValueConfig cfg;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        cfg.values_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    return parse(in);
}

const std::string& KeyValueConfig::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("missing config key " + key);
    }
    return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    return has(key) ? to_double(key, get(key)) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const double d = to_double(key, get(key));
    if (d != std::floor(d)) {
        throw ConfigError("'" + key + "' expects an integer");
    }
    return static_cast<long long>(d);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    std::string v = get(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
}

void KeyValueConfig::write(std::ostream& os) const
{
    std::string current = "\x01";
    for (const auto& [full, value] : values_) {
        const auto dot = full.find('.');
        const std::string section = dot == std::string::npos ? std::string() : full.substr(0, dot);
        const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
        if (section != current) {
            if (current != "\x01") {
                os << '\n';
            }
            if (!section.empty()) {
                os << '[' << section << "]\n";
            }
            current = section;
        }
        os << key << " = " << value << '\n';
    }
}

ModelKind parse_model(const std::string& name)
{
    std::string v = name;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "rs") {
        return ModelKind::RS;
    }
    if (v == "es") {
        return ModelKind::ES;
    }
    throw ConfigError("unknown model '" + name + "' (expected rs or es)");
}

const char* to_string(ModelKind m)
{
    return m == ModelKind::RS ? "rs" : "es";
}

std::vector<double> parse_grid(const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty()) {
        throw ConfigError("empty grid");
    }
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string p;
        while (std::getline(ss, p, ':')) {
            parts.push_back(trim(p));
        }
        if (parts.size() == 2) {
            parts.emplace_back("1");
        }
        if (parts.size() != 3) {
            throw ConfigError("grid range must be lo:hi[:step], got '" + text + "'");
        }
        return make_grid(to_double("grid", parts[0]), to_double("grid", parts[1]), to_double("grid", parts[2]));
    }
    std::vector<double> out;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ',')) {
        out.push_back(to_double("grid", trim(p)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string format_grid(const std::vector<double>& grid)
{
    std::string out;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out += (k ? "," : "") + num(grid[k]);
    }
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (double v : parse_grid(text)) {
        if (v < 0 || v != std::floor(v)) {
            throw ConfigError("seeds must be non-negative integers");
        }
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

void ExperimentConfig::validate() const
{
    if (n < 2) {
        throw ConfigError("network needs n >= 2");
    }
    if (model == ModelKind::ES || swap_topology) {
        if (!(mean_degree >= 1.0) || !(mean_degree < static_cast<double>(n))) {
            throw ConfigError("mean degree must lie in [1, n)");
        }
    }
    if (lambda_grid.empty()) {
        throw ConfigError("lambda grid is empty");
    }
    for (double l : lambda_grid) {
        if (!(l >= 0.0)) {
            throw ConfigError("lambda grid values must be non-negative");
        }
    }
    sweep.variance.validate();
    task.validate();
    readout.validate(sample_dt);
    split.validate();
    if (!(ridge >= 0.0)) {
        throw ConfigError("ridge must be non-negative");
    }
    if (!(relax.t_max > 0.0) || !(relax.tol > 0.0) || !(relax.dt > 0.0)) {
        throw ConfigError("relaxation needs t_max, tol and dt > 0");
    }
    if (seeds.empty()) {
        throw ConfigError("at least one seed is required");
    }
}

KeyValueConfig ExperimentConfig::to_key_values() const
{
    KeyValueConfig kv;
    kv.set("model.model", to_string(model));
    kv.set("model.n", std::to_string(n));
    kv.set("model.mean_degree", num(mean_degree));
    kv.set("model.swap_topology", swap_topology ? "true" : "false");

    kv.set("sweep.lambda", critical_lambda ? "critical" : format_grid(lambda_grid));
    kv.set("sweep.transient", num(sweep.transient));
    kv.set("sweep.measure", num(sweep.measure));
    kv.set("sweep.c", num(sweep.variance.c));
    kv.set("sweep.window", num(sweep.variance.window));

    kv.set("task.kind", to_string(task.kind));
    kv.set("task.m", std::to_string(task.m));
    kv.set("task.a", num(task.a));
    kv.set("task.b", num(task.b));
    kv.set("task.c", num(task.c));
    kv.set("task.filter_m", std::to_string(task.filter_m));

    kv.set("readout.s", std::to_string(readout.s));
    kv.set("readout.delta_t", num(readout.delta_t));
    kv.set("readout.include_input_nodes", readout.include_input_nodes ? "true" : "false");
    kv.set("readout.ridge", num(ridge));

    kv.set("run.train_end", std::to_string(split.train_end));
    kv.set("run.test_end", std::to_string(split.test_end));
    kv.set("run.dt", num(relax.dt));
    kv.set("run.sample_dt", num(sample_dt));
    kv.set("run.relax_t_max", num(relax.t_max));
    kv.set("run.relax_tol", num(relax.tol));
    kv.set("run.phase_span", num(input.phase_span));
    kv.set("run.co_rotating", input.co_rotating ? "true" : "false");
    std::string seed_list;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        seed_list += (k ? "," : "") + std::to_string(seeds[k]);
    }
    kv.set("run.seeds", seed_list);
    kv.set("run.workers", std::to_string(workers));
    kv.set("run.out", output_dir);
    return kv;
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValueConfig& kv)
{
    ExperimentConfig c;
    c.model = parse_model(kv.get_or("model.model", to_string(c.model)));
    c.n = static_cast<std::size_t>(kv.get_int("model.n", static_cast<long long>(c.n)));
    c.mean_degree = kv.get_double("model.mean_degree", c.mean_degree);
    c.swap_topology = kv.get_bool("model.swap_topology", c.swap_topology);

    if (kv.has("sweep.lambda")) {
        if (kv.get("sweep.lambda") == "critical") {
            c.critical_lambda = true;
        } else {
            c.lambda_grid = parse_grid(kv.get("sweep.lambda"));
        }
    }
    c.sweep.transient = kv.get_double("sweep.transient", c.sweep.transient);
    c.sweep.measure = kv.get_double("sweep.measure", c.sweep.measure);
    c.sweep.variance.c = kv.get_double("sweep.c", c.sweep.variance.c);
    c.sweep.variance.window = kv.get_double("sweep.window", c.sweep.variance.window);

    c.task.kind = parse_task_kind(kv.get_or("task.kind", to_string(c.task.kind)));
    c.task.m = static_cast<int>(kv.get_int("task.m", c.task.m));
    c.task.a = kv.get_double("task.a", c.task.a);
    c.task.b = kv.get_double("task.b", c.task.b);
    c.task.c = kv.get_double("task.c", c.task.c);
    c.task.filter_m = static_cast<int>(kv.get_int("task.filter_m", c.task.filter_m));

    c.readout.s = static_cast<int>(kv.get_int("readout.s", c.readout.s));
    c.readout.delta_t = kv.get_double("readout.delta_t", c.readout.delta_t);
    c.readout.include_input_nodes = kv.get_bool("readout.include_input_nodes", c.readout.include_input_nodes);
    c.ridge = kv.get_double("readout.ridge", c.ridge);

    c.split.train_end = static_cast<int>(kv.get_int("run.train_end", c.split.train_end));
    c.split.test_end = static_cast<int>(kv.get_int("run.test_end", c.split.test_end));
    c.relax.dt = kv.get_double("run.dt", c.relax.dt);
    c.sweep.dt = c.relax.dt;
    c.sample_dt = kv.get_double("run.sample_dt", c.sample_dt);
    c.sweep.variance.sample_dt = c.sample_dt;
    c.relax.t_max = kv.get_double("run.relax_t_max", c.relax.t_max);
    c.relax.tol = kv.get_double("run.relax_tol", c.relax.tol);
    c.input.phase_span = kv.get_double("run.phase_span", c.input.phase_span);
    c.input.co_rotating = kv.get_bool("run.co_rotating", c.input.co_rotating);
    if (kv.has("run.seeds")) {
        c.seeds = parse_seeds(kv.get("run.seeds"));
    }
    c.workers = static_cast<unsigned>(kv.get_int("run.workers", c.workers));
    c.output_dir = kv.get_or("run.out", c.output_dir);

    for (const auto& [key, value] : kv.values()) {
        static const char* known[] = {"model.model", "model.n", "model.mean_degree", "model.swap_topology",
                                      "sweep.lambda", "sweep.transient", "sweep.measure", "sweep.c",
                                      "sweep.window", "task.kind", "task.m", "task.a", "task.b", "task.c",
                                      "task.filter_m", "readout.s", "readout.delta_t",
                                      "readout.include_input_nodes", "readout.ridge", "run.train_end",
                                      "run.test_end", "run.dt", "run.sample_dt", "run.relax_t_max",
                                      "run.relax_tol", "run.phase_span", "run.co_rotating", "run.seeds",
                                      "run.workers", "run.out"};
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw ConfigError("unknown config key " + key);
        }
    }
    c.validate();
    return c;
}

SeededSetup make_setup(const ExperimentConfig& cfg, std::uint64_t seed)
{
    SeededSetup s;
    s.omega = NaturalFrequencies::sample_normal(cfg.n, derive(seed, kFrequencies));
    const bool complete = (cfg.model == ModelKind::RS) != cfg.swap_topology;
    if (complete) {
        s.net = std::make_shared<const NetworkSpec>(complete_graph(cfg.n));
    } else {
        s.net = std::make_shared<const NetworkSpec>(erdos_renyi(cfg.n, cfg.mean_degree, derive(seed, kGraph)));
    }
    s.variant = cfg.model == ModelKind::RS ? CouplingVariant::Regular : CouplingVariant::Explosive;
    return s;
}

ReservoirSpec make_reservoir_spec(const ExperimentConfig& cfg, const SeededSetup& setup, double lambda,
                                  std::uint64_t seed)
{
    ReservoirSpec spec;
    spec.net = setup.net;
    spec.omega = setup.omega;
    spec.coupling = {setup.variant, lambda};
    spec.readout = cfg.readout;
    spec.split = cfg.split;
    spec.relax = cfg.relax;
    spec.input = cfg.input;
    spec.ridge = cfg.ridge;
    spec.sample_dt = cfg.sample_dt;
    spec.seed = derive(seed, kPhases);
    spec.ground = cfg.sweep.variance;
    spec.ground.sample_dt = cfg.sample_dt;
    return spec;
}

TaskSpec seeded_task(const TaskSpec& task, std::uint64_t seed)
{
    TaskSpec t = task;
    t.seed = derive(seed, kSignal);
    return t;
}

} // namespace krc
