#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jumpcp/bootstrap.hpp"
#include "jumpcp/eta_profile.hpp"
#include "jumpcp/grids.hpp"
#include "jumpcp/inference.hpp"
#include "jumpcp/rho.hpp"
#include "jumpcp/truncation.hpp"

// Seeded Monte Carlo experiment runner. Replications draw their random
// streams from (master_seed, replication index, role), so results are
// bit-identical for any parallelism degree, and aggregation reduces in
// replication order.

namespace jumpcp {

enum class Regime { h0, abrupt, gradual };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& text);

struct ScenarioSpec {
    Regime regime = Regime::h0;
    double psi = 2.0;        // post-change jump intensity factor (abrupt)
    double theta0 = 0.5;     // change location (abrupt, gradual)
    double amplitude = 0.0;  // ramp coefficient (gradual)
    double exponent = 1.0;   // ramp power (gradual)
    bool overlay = false;    // add unit drift plus Brownian motion
    std::string name;        // CSV label; derived from the parameters if empty

    EtaProfile profile() const;
    std::string label() const;
    void validate() const;
};

enum class Procedure {
    abrupt_global,           // rejection rate of the global CUSUM test
    abrupt_pointwise_boot,   // rejection rate at each t0, multiplier quantile
    abrupt_pointwise_exact,  // rejection rate at each t0, Kolmogorov quantile
    gradual_global,          // rejection rate of the variation test
    gradual_pointwise,       // rejection rate at each t0
    argmax_abrupt,           // deviation of the argmax estimator from theta0
    five_step,               // deviation of the five-step pipeline from theta0
};

std::string to_string(Procedure procedure);
Procedure procedure_from_string(const std::string& text);

struct ExperimentConfig {
    std::vector<ScenarioSpec> scenarios{ScenarioSpec{}};
    std::size_t n = 4000;                 // increments per path
    std::vector<double> horizons{100.0};  // k_n values; delta_n = k_n / n
    std::size_t replications = 500;       // Monte Carlo repetitions per cell
    MultiplierSpec mult;                  // multiplier kind and draw count B
    double alpha = 0.05;                  // test level
    FiveStepConfig five_step;             // gradual pipeline settings
    std::vector<Procedure> procedures{Procedure::abrupt_global};
    std::vector<double> t0_list{1.0};     // levels for pointwise procedures
    std::vector<double> level_grid = level_grid_fine();
    std::vector<double> threshold_grid = level_grid_coarse();  // five-step only
    TruncationSpec trunc;
    RhoFunction rho;
    std::uint64_t master_seed = 1;
    std::size_t jobs = 1;    // worker threads; 0 = hardware concurrency
    std::string output_dir;  // consumed by the CLI layer, ignored here

    void validate() const;
};

struct MetricRow {
    std::string scenario;
    std::size_t n = 0;
    double horizon = 0.0;  // k_n
    std::string procedure;
    std::optional<double> t0;   // empty for global procedures and estimators
    std::string metric;         // rejection_rate | mad | median_theta_hat
    double value = 0.0;
    double se = 0.0;            // binomial or empirical; 0 when not defined
    std::size_t replications = 0;  // successful replications behind the row
};

struct CellDiagnostics {
    std::string scenario;
    std::size_t n = 0;
    double horizon = 0.0;
    std::size_t failures = 0;
    std::string first_error;
};

struct ExperimentResult {
    std::vector<MetricRow> rows;
    std::vector<CellDiagnostics> diagnostics;  // only cells with failed replications
    std::uint64_t master_seed = 0;
    double wall_seconds = 0.0;
};

// Runs every (scenario, horizon) cell with `replications` seeded repetitions.
// Failed replications are skipped, counted, and reported in diagnostics; the
// remaining rows aggregate the successes.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class TableScale { full, desk };

TableScale table_scale_from_string(const std::string& text);

// Preconfigured experiments matching the reference study layout (tables 1-4:
// abrupt tests pure / with overlay, gradual tests pure / with overlay).
// `full` uses n = 22500 and 500 replications; `desk` shrinks to n = 4000,
// 300 replications, and the two smallest horizons so a run takes minutes.
ExperimentConfig table_config(int table_id, TableScale scale, std::uint64_t master_seed,
                              std::size_t jobs);
ExperimentResult replicate_table(int table_id, TableScale scale, std::uint64_t master_seed,
                                 std::size_t jobs);

}  // namespace jumpcp
