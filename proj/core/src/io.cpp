#include "jumpcp/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace jumpcp {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::ofstream open_out(const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file);
    return out;
}

void finish_out(std::ofstream& out, const std::string& file) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + file);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_double(const std::string& text, const std::string& file, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(value))
        throw std::runtime_error(file + ": line " + std::to_string(line_no) +
                                 ": not a finite number: '" + text + "'");
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

json scenario_to_json(const ScenarioSpec& scenario) {
    return json{{"regime", to_string(scenario.regime)}, {"psi", scenario.psi},
                {"theta0", scenario.theta0},           {"amplitude", scenario.amplitude},
                {"exponent", scenario.exponent},       {"overlay", scenario.overlay},
                {"name", scenario.name}};
}

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec scenario;
    if (j.contains("regime")) scenario.regime = regime_from_string(j.at("regime").get<std::string>());
    if (j.contains("psi")) scenario.psi = j.at("psi").get<double>();
    if (j.contains("theta0")) scenario.theta0 = j.at("theta0").get<double>();
    if (j.contains("amplitude")) scenario.amplitude = j.at("amplitude").get<double>();
    if (j.contains("exponent")) scenario.exponent = j.at("exponent").get<double>();
    if (j.contains("overlay")) scenario.overlay = j.at("overlay").get<bool>();
    if (j.contains("name")) scenario.name = j.at("name").get<std::string>();
    return scenario;
}

json config_to_json(const ExperimentConfig& config) {
    json scenarios = json::array();
    for (const ScenarioSpec& scenario : config.scenarios)
        scenarios.push_back(scenario_to_json(scenario));
    json procedures = json::array();
    for (const Procedure procedure : config.procedures)
        procedures.push_back(to_string(procedure));

    return json{
        {"scenarios", scenarios},
        {"n", config.n},
        {"horizons", config.horizons},
        {"replications", config.replications},
        {"multiplier_kind", to_string(config.mult.kind)},
        {"bootstrap_replications", config.mult.replications},
        {"alpha", config.alpha},
        {"five_step",
         json{{"theta_pre", config.five_step.theta_pre},
              {"alpha", config.five_step.alpha},
              {"r", config.five_step.r}}},
        {"procedures", procedures},
        {"t0_list", config.t0_list},
        {"level_grid", config.level_grid},
        {"threshold_grid", config.threshold_grid},
        {"truncation", json{{"gamma", config.trunc.gamma}, {"omega", config.trunc.omega}}},
        {"rho", json{{"scale", config.rho.scale}, {"power", config.rho.power}}},
        {"master_seed", config.master_seed},
        {"jobs", config.jobs},
        {"output_dir", config.output_dir},
    };
}

}  // namespace

void write_path_csv(const std::string& file, const SamplePath& path) {
    std::ofstream out = open_out(file);
    out << "i,t,x\n";
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        const double t = static_cast<double>(i) * path.delta_n;
        out << i << ',' << fmt(t) << ',' << fmt(path.values[i]) << '\n';
    }
    finish_out(out, file);
}

SamplePath read_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open: " + file);

    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "i,t,x")
        throw std::runtime_error(file + ": expected header 'i,t,x'");

    std::vector<double> times;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != 3)
            throw std::runtime_error(file + ": line " + std::to_string(line_no) +
                                     ": expected 3 columns");
        const double index = parse_double(fields[0], file, line_no);
        if (index != static_cast<double>(values.size()))
            throw std::runtime_error(file + ": line " + std::to_string(line_no) +
                                     ": indices must run 0,1,2,... without gaps");
        times.push_back(parse_double(fields[1], file, line_no));
        values.push_back(parse_double(fields[2], file, line_no));
    }
    if (values.size() < 2)
        throw std::runtime_error(file + ": need at least the origin and one observation");

    const std::size_t n = values.size() - 1;
    const double total = times.back();
    if (!(total > 0.0)) throw std::runtime_error(file + ": final time must be positive");
    const double delta_n = total / static_cast<double>(n);
    const double tolerance = 1e-6 * std::max(1.0, total);
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - static_cast<double>(i) * delta_n) > tolerance)
            throw std::runtime_error(file + ": time column is not an even grid (row " +
                                     std::to_string(i) + ")");

    SamplePath path;
    path.n = n;
    path.delta_n = delta_n;
    path.values = std::move(values);
    return path;
}

void write_jumps_csv(const std::string& file, const SamplePath& path) {
    std::ofstream out = open_out(file);
    out << "time,size,level_time\n";
    for (const JumpEvent& jump : path.jumps)
        out << fmt(jump.time) << ',' << fmt(jump.size) << ',' << fmt(jump.level_time) << '\n';
    finish_out(out, file);
}

void write_metrics_csv(const std::string& file, const ExperimentResult& result) {
    std::ofstream out = open_out(file);
    out << "scenario,n,kn,procedure,t0,metric,value,se,replications\n";
    for (const MetricRow& row : result.rows) {
        out << row.scenario << ',' << row.n << ',' << fmt(row.horizon) << ',' << row.procedure
            << ',';
        if (row.t0) out << fmt(*row.t0);
        out << ',' << row.metric << ',' << fmt(row.value) << ',' << fmt(row.se) << ','
            << row.replications << '\n';
    }
    finish_out(out, file);
}

void write_manifest_json(const std::string& file, const ExperimentConfig& config,
                         const ExperimentResult& result) {
    json diagnostics = json::array();
    for (const CellDiagnostics& cell : result.diagnostics)
        diagnostics.push_back(json{{"scenario", cell.scenario},
                                   {"n", cell.n},
                                   {"kn", cell.horizon},
                                   {"failures", cell.failures},
                                   {"first_error", cell.first_error}});

    const json manifest{
        {"version", kVersion},
        {"config", config_to_json(config)},
        {"master_seed", result.master_seed},
        {"wall_seconds", result.wall_seconds},
        {"rows", result.rows.size()},
        {"diagnostics", diagnostics},
    };

    std::ofstream out = open_out(file);
    out << manifest.dump(2) << '\n';
    finish_out(out, file);
}

ExperimentConfig read_experiment_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open: " + file);

    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::runtime_error(file + ": invalid JSON: " + err.what());
    }

    ExperimentConfig config;
    if (j.contains("scenarios")) {
        config.scenarios.clear();
        for (const json& s : j.at("scenarios")) config.scenarios.push_back(scenario_from_json(s));
    }
    if (j.contains("n")) config.n = j.at("n").get<std::size_t>();
    if (j.contains("horizons")) config.horizons = j.at("horizons").get<std::vector<double>>();
    if (j.contains("replications")) config.replications = j.at("replications").get<std::size_t>();
    if (j.contains("multiplier_kind"))
        config.mult.kind = multiplier_kind_from_string(j.at("multiplier_kind").get<std::string>());
    if (j.contains("bootstrap_replications"))
        config.mult.replications = j.at("bootstrap_replications").get<std::size_t>();
    if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
    if (j.contains("five_step")) {
        const json& f = j.at("five_step");
        if (f.contains("theta_pre")) config.five_step.theta_pre = f.at("theta_pre").get<double>();
        if (f.contains("alpha")) config.five_step.alpha = f.at("alpha").get<double>();
        if (f.contains("r")) config.five_step.r = f.at("r").get<double>();
    }
    if (j.contains("procedures")) {
        config.procedures.clear();
        for (const json& p : j.at("procedures"))
            config.procedures.push_back(procedure_from_string(p.get<std::string>()));
    }
    if (j.contains("t0_list")) config.t0_list = j.at("t0_list").get<std::vector<double>>();
    if (j.contains("level_grid")) config.level_grid = j.at("level_grid").get<std::vector<double>>();
    if (j.contains("threshold_grid"))
        config.threshold_grid = j.at("threshold_grid").get<std::vector<double>>();
    if (j.contains("truncation")) {
        const json& t = j.at("truncation");
        if (t.contains("gamma")) config.trunc.gamma = t.at("gamma").get<double>();
        if (t.contains("omega")) config.trunc.omega = t.at("omega").get<double>();
    }
    if (j.contains("rho")) {
        const json& r = j.at("rho");
        if (r.contains("scale")) config.rho.scale = r.at("scale").get<double>();
        if (r.contains("power")) config.rho.power = r.at("power").get<double>();
    }
    if (j.contains("master_seed")) config.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("jobs")) config.jobs = j.at("jobs").get<std::size_t>();
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();

    config.validate();
    return config;
}

}  // namespace jumpcp
