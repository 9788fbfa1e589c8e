#include "jumpcp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <utility>

#include "jumpcp/parallel.hpp"
#include "jumpcp/simulate.hpp"
#include "jumpcp/weights.hpp"

namespace jumpcp {

namespace {

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

// One test decision per replication: a procedure expanded at one level (or
// globally), with its critical-value source.
struct TestSlot {
    Procedure procedure = Procedure::abrupt_global;
    std::optional<double> t0;
    std::size_t u0 = 0;        // level index for pointwise slots
    bool pointwise = false;
    bool variation = false;    // variation statistic; otherwise CUSUM
    bool bootstrapped = true;  // multiplier quantile; otherwise Kolmogorov
};

struct CellPlan {
    std::vector<TestSlot> slots;
    bool has_argmax = false;
    bool has_five = false;
    bool needs_bootstrap = false;
    double ks_critical = 0.0;  // shared by all exact slots
};

CellPlan make_plan(const ExperimentConfig& config) {
    CellPlan plan;
    bool has_exact = false;
    for (const Procedure procedure : config.procedures) {
        switch (procedure) {
            case Procedure::abrupt_global:
                plan.slots.push_back({procedure, std::nullopt, 0, false, false, true});
                break;
            case Procedure::gradual_global:
                plan.slots.push_back({procedure, std::nullopt, 0, false, true, true});
                break;
            case Procedure::abrupt_pointwise_boot:
                for (const double t0 : config.t0_list)
                    plan.slots.push_back(
                        {procedure, t0, level_index(config.level_grid, t0), true, false, true});
                break;
            case Procedure::abrupt_pointwise_exact:
                for (const double t0 : config.t0_list)
                    plan.slots.push_back(
                        {procedure, t0, level_index(config.level_grid, t0), true, false, false});
                has_exact = true;
                break;
            case Procedure::gradual_pointwise:
                for (const double t0 : config.t0_list)
                    plan.slots.push_back(
                        {procedure, t0, level_index(config.level_grid, t0), true, true, true});
                break;
            case Procedure::argmax_abrupt:
                plan.has_argmax = true;
                break;
            case Procedure::five_step:
                plan.has_five = true;
                break;
        }
    }
    for (const TestSlot& slot : plan.slots)
        if (slot.bootstrapped) plan.needs_bootstrap = true;
    if (has_exact) plan.ks_critical = ks_quantile(config.alpha);
    return plan;
}

struct RepOutcome {
    bool ok = false;
    std::string error;
    std::vector<char> reject;   // one flag per plan slot
    double theta_argmax = 0.0;  // meaningful iff plan.has_argmax
    double theta_five = 0.0;    // meaningful iff plan.has_five
};

double slot_statistic(const PrefixField& field, const TestSlot& slot, double root,
                      std::size_t n) {
    double sup = 0.0;
    if (slot.variation)
        sup = slot.pointwise ? field.variation_sup_at(slot.u0, n) : field.variation_sup(n);
    else
        sup = slot.pointwise ? field.cusum_sup_at(slot.u0) : field.cusum_sup();
    return sup / root;
}

// One seeded replication: simulate, weigh, decide every slot with shared
// multiplier draws, then run the requested estimators. The multiplier stream
// is consumed in a fixed order, so outcomes do not depend on scheduling.
void run_replication(const ExperimentConfig& config, const ScenarioSpec& scenario, double horizon,
                     const CellPlan& plan, std::size_t rep, RepOutcome& out) {
    SimConfig sim;
    sim.n = config.n;
    sim.horizon = horizon;
    sim.profile = scenario.profile();
    sim.brownian_overlay = scenario.overlay;

    const SamplePath path = simulate_path(sim, config.master_seed, rep);
    const IncrementWeights w =
        IncrementWeights::build(path, config.rho, config.trunc, config.level_grid);
    const double root = w.scale_root();

    out.reject.assign(plan.slots.size(), 0);
    RngStream mrng = RngStream::derive(config.master_seed, rep, StreamRole::multipliers, 0);

    if (!plan.slots.empty()) {
        PrefixField field(w, PrefixField::Kind::plain);
        std::vector<double> statistic(plan.slots.size(), 0.0);
        for (std::size_t s = 0; s < plan.slots.size(); ++s) {
            const TestSlot& slot = plan.slots[s];
            statistic[s] = slot.bootstrapped ? slot_statistic(field, slot, root, w.n)
                                             : pointwise_pivot(w, *slot.t0);
        }

        std::vector<std::vector<double>> draws(plan.slots.size());
        if (plan.needs_bootstrap) {
            for (std::size_t s = 0; s < plan.slots.size(); ++s)
                if (plan.slots[s].bootstrapped) draws[s].resize(config.mult.replications);

            std::vector<double> xi(w.n);
            for (std::size_t b = 0; b < config.mult.replications; ++b) {
                draw_multipliers(std::span<double>(xi), config.mult.kind, mrng);
                field.assign(w, PrefixField::Kind::plain, xi);
                for (std::size_t s = 0; s < plan.slots.size(); ++s)
                    if (plan.slots[s].bootstrapped)
                        draws[s][b] = slot_statistic(field, plan.slots[s], root, w.n);
            }
        }

        for (std::size_t s = 0; s < plan.slots.size(); ++s) {
            const double critical = plan.slots[s].bootstrapped
                                        ? empirical_quantile(std::move(draws[s]), 1.0 - config.alpha)
                                        : plan.ks_critical;
            out.reject[s] = statistic[s] >= critical ? 1 : 0;
        }
    }

    if (plan.has_argmax) out.theta_argmax = estimate_abrupt(w).theta_hat;
    if (plan.has_five) {
        const IncrementWeights threshold_w =
            IncrementWeights::build(path, config.rho, config.trunc, config.threshold_grid);
        out.theta_five =
            five_step_gradual(threshold_w, config.five_step, config.mult, mrng).theta_hat;
    }
    out.ok = true;
}

void append_estimator_rows(std::vector<MetricRow>& rows, const std::string& scenario_label,
                           std::size_t n, double horizon, Procedure procedure, double theta0,
                           std::vector<double> estimates) {
    const std::size_t count = estimates.size();
    if (count == 0) return;

    double mean_abs = 0.0;
    for (const double estimate : estimates) mean_abs += std::fabs(estimate - theta0);
    mean_abs /= static_cast<double>(count);

    double variance = 0.0;
    if (count >= 2) {
        for (const double estimate : estimates) {
            const double dev = std::fabs(estimate - theta0) - mean_abs;
            variance += dev * dev;
        }
        variance /= static_cast<double>(count - 1);
    }
    const double se = count >= 2 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;

    std::sort(estimates.begin(), estimates.end());
    const double median = count % 2 == 1
                              ? estimates[count / 2]
                              : 0.5 * (estimates[count / 2 - 1] + estimates[count / 2]);

    rows.push_back({scenario_label, n, horizon, to_string(procedure), std::nullopt, "mad",
                    mean_abs, se, count});
    rows.push_back({scenario_label, n, horizon, to_string(procedure), std::nullopt,
                    "median_theta_hat", median, 0.0, count});
}

void append_cell(const ExperimentConfig& config, const ScenarioSpec& scenario, double horizon,
                 const CellPlan& plan, const std::vector<RepOutcome>& outcomes,
                 ExperimentResult& result) {
    const std::string label = scenario.label();

    std::size_t failures = 0;
    std::string first_error;
    std::size_t successes = 0;
    for (const RepOutcome& out : outcomes) {
        if (out.ok) {
            ++successes;
        } else {
            if (failures == 0) first_error = out.error;
            ++failures;
        }
    }
    if (failures > 0)
        result.diagnostics.push_back({label, config.n, horizon, failures, first_error});
    if (successes == 0) return;

    for (std::size_t s = 0; s < plan.slots.size(); ++s) {
        std::size_t rejections = 0;
        for (const RepOutcome& out : outcomes)
            if (out.ok && out.reject[s]) ++rejections;
        const double rate = static_cast<double>(rejections) / static_cast<double>(successes);
        const double se = std::sqrt(rate * (1.0 - rate) / static_cast<double>(successes));
        result.rows.push_back({label, config.n, horizon, to_string(plan.slots[s].procedure),
                               plan.slots[s].t0, "rejection_rate", rate, se, successes});
    }

    if (plan.has_argmax) {
        std::vector<double> estimates;
        estimates.reserve(successes);
        for (const RepOutcome& out : outcomes)
            if (out.ok) estimates.push_back(out.theta_argmax);
        append_estimator_rows(result.rows, label, config.n, horizon, Procedure::argmax_abrupt,
                              scenario.theta0, std::move(estimates));
    }
    if (plan.has_five) {
        std::vector<double> estimates;
        estimates.reserve(successes);
        for (const RepOutcome& out : outcomes)
            if (out.ok) estimates.push_back(out.theta_five);
        append_estimator_rows(result.rows, label, config.n, horizon, Procedure::five_step,
                              scenario.theta0, std::move(estimates));
    }
}

}  // namespace

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::h0: return "h0";
        case Regime::abrupt: return "abrupt";
        case Regime::gradual: return "gradual";
    }
    throw std::logic_error("to_string: unknown regime");
}

Regime regime_from_string(const std::string& text) {
    if (text == "h0") return Regime::h0;
    if (text == "abrupt") return Regime::abrupt;
    if (text == "gradual") return Regime::gradual;
    throw std::invalid_argument("unknown regime: " + text);
}

EtaProfile ScenarioSpec::profile() const {
    switch (regime) {
        case Regime::h0: return EtaProfile::constant(1.0);
        case Regime::abrupt: return EtaProfile::abrupt(theta0, psi);
        case Regime::gradual: return EtaProfile::gradual(theta0, amplitude, exponent);
    }
    throw std::logic_error("scenario: unknown regime");
}

std::string ScenarioSpec::label() const {
    if (!name.empty()) return name;
    std::string base;
    switch (regime) {
        case Regime::h0:
            base = "h0";
            break;
        case Regime::abrupt:
            base = "abrupt_psi" + format_number(psi) + "_th" + format_number(theta0);
            break;
        case Regime::gradual:
            base = "gradual_A" + format_number(amplitude) + "_w" + format_number(exponent) +
                   "_th" + format_number(theta0);
            break;
    }
    if (overlay) base += "_bm";
    return base;
}

void ScenarioSpec::validate() const { (void)profile(); }

std::string to_string(Procedure procedure) {
    switch (procedure) {
        case Procedure::abrupt_global: return "abrupt_global";
        case Procedure::abrupt_pointwise_boot: return "abrupt_pointwise_boot";
        case Procedure::abrupt_pointwise_exact: return "abrupt_pointwise_exact";
        case Procedure::gradual_global: return "gradual_global";
        case Procedure::gradual_pointwise: return "gradual_pointwise";
        case Procedure::argmax_abrupt: return "argmax_abrupt";
        case Procedure::five_step: return "five_step";
    }
    throw std::logic_error("to_string: unknown procedure");
}

Procedure procedure_from_string(const std::string& text) {
    if (text == "abrupt_global") return Procedure::abrupt_global;
    if (text == "abrupt_pointwise_boot") return Procedure::abrupt_pointwise_boot;
    if (text == "abrupt_pointwise_exact") return Procedure::abrupt_pointwise_exact;
    if (text == "gradual_global") return Procedure::gradual_global;
    if (text == "gradual_pointwise") return Procedure::gradual_pointwise;
    if (text == "argmax_abrupt") return Procedure::argmax_abrupt;
    if (text == "five_step") return Procedure::five_step;
    throw std::invalid_argument("unknown procedure: " + text);
}

void ExperimentConfig::validate() const {
    if (scenarios.empty()) throw std::invalid_argument("experiment: no scenarios");
    for (const ScenarioSpec& scenario : scenarios) scenario.validate();
    if (n == 0) throw std::invalid_argument("experiment: n must be positive");
    if (horizons.empty()) throw std::invalid_argument("experiment: no horizons");
    for (const double horizon : horizons)
        if (!(horizon > 0.0)) throw std::invalid_argument("experiment: horizons must be positive");
    if (replications == 0) throw std::invalid_argument("experiment: replications must be >= 1");
    mult.validate();
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("experiment: alpha must lie in (0, 1)");
    five_step.validate();
    if (procedures.empty()) throw std::invalid_argument("experiment: no procedures");
    if (level_grid.empty()) throw std::invalid_argument("experiment: empty level grid");
    if (!std::is_sorted(level_grid.begin(), level_grid.end()))
        throw std::invalid_argument("experiment: level grid must be sorted");
    trunc.validate();
    rho.validate();

    bool pointwise = false;
    bool five = false;
    for (const Procedure procedure : procedures) {
        pointwise = pointwise || procedure == Procedure::abrupt_pointwise_boot ||
                    procedure == Procedure::abrupt_pointwise_exact ||
                    procedure == Procedure::gradual_pointwise;
        five = five || procedure == Procedure::five_step;
    }
    if (pointwise) {
        if (t0_list.empty())
            throw std::invalid_argument("experiment: pointwise procedures need t0 values");
        for (const double t0 : t0_list) (void)level_index(level_grid, t0);
    }
    if (five) {
        if (threshold_grid.empty())
            throw std::invalid_argument("experiment: five-step needs a threshold grid");
        if (!std::is_sorted(threshold_grid.begin(), threshold_grid.end()))
            throw std::invalid_argument("experiment: threshold grid must be sorted");
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    ExperimentResult result;
    result.master_seed = config.master_seed;
    const CellPlan plan = make_plan(config);

    for (const ScenarioSpec& scenario : config.scenarios) {
        for (const double horizon : config.horizons) {
            std::vector<RepOutcome> outcomes(config.replications);
            parallel_for(config.jobs, config.replications, [&](std::size_t rep) {
                RepOutcome& out = outcomes[rep];
                try {
                    run_replication(config, scenario, horizon, plan, rep, out);
                } catch (const std::exception& err) {
                    out.ok = false;
                    out.error = err.what();
                } catch (...) {
                    out.ok = false;
                    out.error = "unknown error";
                }
            });
            append_cell(config, scenario, horizon, plan, outcomes, result);
        }
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

TableScale table_scale_from_string(const std::string& text) {
    if (text == "full") return TableScale::full;
    if (text == "desk") return TableScale::desk;
    throw std::invalid_argument("unknown scale: " + text);
}

ExperimentConfig table_config(int table_id, TableScale scale, std::uint64_t master_seed,
                              std::size_t jobs) {
    if (table_id < 1 || table_id > 4)
        throw std::invalid_argument("table_config: table_id must be in 1..4");
    const bool desk = scale == TableScale::desk;

    ExperimentConfig config;
    config.master_seed = master_seed;
    config.jobs = jobs;
    config.n = desk ? 4000 : 22500;
    config.replications = desk ? 300 : 500;
    config.mult.replications = 200;
    config.alpha = 0.05;
    config.t0_list = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

    ScenarioSpec scenario;
    scenario.regime = Regime::h0;
    scenario.overlay = table_id == 2 || table_id == 4;
    config.scenarios = {scenario};

    if (table_id <= 2) {
        config.procedures = {Procedure::abrupt_global, Procedure::abrupt_pointwise_boot,
                             Procedure::abrupt_pointwise_exact};
        config.horizons = desk ? std::vector<double>{50.0, 100.0}
                               : std::vector<double>{50.0, 75.0, 100.0, 150.0, 250.0};
    } else {
        config.procedures = {Procedure::gradual_global, Procedure::gradual_pointwise};
        config.horizons = desk ? std::vector<double>{50.0, 100.0}
                               : std::vector<double>{50.0, 100.0, 250.0};
    }
    return config;
}

ExperimentResult replicate_table(int table_id, TableScale scale, std::uint64_t master_seed,
                                 std::size_t jobs) {
    return run_experiment(table_config(table_id, scale, master_seed, jobs));
}

}  // namespace jumpcp
