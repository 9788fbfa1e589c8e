#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jumpcp/bootstrap.hpp"
#include "jumpcp/rho.hpp"
#include "jumpcp/rng.hpp"
#include "jumpcp/sample_path.hpp"
#include "jumpcp/truncation.hpp"
#include "jumpcp/weights.hpp"

// Hypothesis tests and change-point estimators built on the truncated
// empirical jump statistics. Decision convention throughout: reject iff
// statistic >= critical value, so a tie (e.g. a single unit multiplier
// draw reproducing the data statistic) rejects.

namespace jumpcp {

enum class TestMethod {
    abrupt_global,          // sup over steps and levels vs multiplier quantile
    abrupt_pointwise_boot,  // sup over steps at one level vs multiplier quantile
    abrupt_pointwise_exact, // studentized sup at one level vs Kolmogorov quantile
    gradual_global,         // two-parameter variation sup vs multiplier quantile
    gradual_pointwise,      // same at one level
};

std::string to_string(TestMethod method);

struct TestReport {
    TestMethod method = TestMethod::abrupt_global;
    double statistic = 0.0;
    double critical_value = 0.0;
    double alpha = 0.05;
    std::size_t replications = 0;  // multiplier draws behind critical_value; 0 = analytic
    bool reject = false;           // statistic >= critical_value
    bool degenerate = false;       // no surviving increment carries weight at the tested levels
    std::optional<double> t0;      // level for pointwise procedures
};

enum class EstimatorMethod {
    argmax_global,
    argmax_pointwise,
    gradual_threshold,
    five_step,
};

std::string to_string(EstimatorMethod method);

struct CurvePoint {
    double theta = 0.0;
    double value = 0.0;
};

struct ChangePointEstimate {
    double theta_hat = 0.0;  // always in [0, 1]
    EstimatorMethod method = EstimatorMethod::argmax_global;
    std::optional<double> threshold_used;     // final lambda for threshold-based methods
    std::optional<double> threshold_initial;  // first-pass lambda of the five-step pipeline
    std::optional<double> intermediate;       // first-pass estimate of the five-step pipeline
    bool degenerate = false;                  // decision curve identically zero
    std::vector<CurvePoint> curve;            // sampled decision curve, ascending theta
};

struct FiveStepConfig {
    double theta_pre = 0.1;  // preliminary location for the first threshold
    double alpha = 0.10;     // threshold-selection level, distinct from any test level
    double r = 0.3;          // power applied to the multiplier draws
    void validate() const;
};

// Abrupt-change tests.
TestReport test_abrupt_global(const IncrementWeights& w, double alpha,
                              const MultiplierSpec& mult, RngStream& rng);
TestReport test_abrupt_pointwise_boot(const IncrementWeights& w, double t0, double alpha,
                                      const MultiplierSpec& mult, RngStream& rng);
TestReport test_abrupt_pointwise_exact(const IncrementWeights& w, double t0, double alpha);

// Gradual-change tests.
TestReport test_gradual_global(const IncrementWeights& w, double alpha,
                               const MultiplierSpec& mult, RngStream& rng);
TestReport test_gradual_pointwise(const IncrementWeights& w, double t0, double alpha,
                                  const MultiplierSpec& mult, RngStream& rng);

// Argmax estimator for an abrupt change: scans every step K = 0..n and keeps
// the smallest maximizer of the CUSUM magnitude (all levels, or only t0).
ChangePointEstimate estimate_abrupt(const IncrementWeights& w,
                                    std::optional<double> t0 = std::nullopt);

// Threshold for the gradual estimator: (1 - alpha)-quantile of multiplier
// variation sups at theta_pre, each raised to the power r.
double select_threshold(const IncrementWeights& w, double theta_pre, double alpha, double r,
                        const MultiplierSpec& mult, RngStream& rng);

// Gradual estimator: fraction of steps whose scaled variation sup stays at or
// below lambda. The curve is nondecreasing in the step count, so the estimate
// is the crossing point; nondecreasing in lambda. Accepts lambda = 0.
ChangePointEstimate estimate_gradual(const IncrementWeights& w, double lambda);

// Data-driven pipeline: threshold at a preliminary location, estimate,
// re-threshold at the estimate reusing the same multiplier draws, re-estimate.
// Reports both thresholds and the intermediate estimate.
ChangePointEstimate five_step_gradual(const IncrementWeights& w, const FiveStepConfig& config,
                                      const MultiplierSpec& mult, RngStream& rng);

// Convenience overloads that build the increment weights from a raw path.
TestReport test_abrupt_global(const SamplePath& path, const RhoFunction& rho,
                              const TruncationSpec& trunc, std::vector<double> level_grid,
                              double alpha, const MultiplierSpec& mult, RngStream& rng);
TestReport test_abrupt_pointwise_boot(const SamplePath& path, const RhoFunction& rho,
                                      const TruncationSpec& trunc, std::vector<double> level_grid,
                                      double t0, double alpha, const MultiplierSpec& mult,
                                      RngStream& rng);
TestReport test_abrupt_pointwise_exact(const SamplePath& path, const RhoFunction& rho,
                                       const TruncationSpec& trunc, std::vector<double> level_grid,
                                       double t0, double alpha);
TestReport test_gradual_global(const SamplePath& path, const RhoFunction& rho,
                               const TruncationSpec& trunc, std::vector<double> level_grid,
                               double alpha, const MultiplierSpec& mult, RngStream& rng);
TestReport test_gradual_pointwise(const SamplePath& path, const RhoFunction& rho,
                                  const TruncationSpec& trunc, std::vector<double> level_grid,
                                  double t0, double alpha, const MultiplierSpec& mult,
                                  RngStream& rng);
ChangePointEstimate estimate_abrupt(const SamplePath& path, const RhoFunction& rho,
                                    const TruncationSpec& trunc, std::vector<double> level_grid,
                                    std::optional<double> t0 = std::nullopt);
double select_threshold(const SamplePath& path, const RhoFunction& rho,
                        const TruncationSpec& trunc, std::vector<double> level_grid,
                        double theta_pre, double alpha, double r, const MultiplierSpec& mult,
                        RngStream& rng);
ChangePointEstimate estimate_gradual(const SamplePath& path, const RhoFunction& rho,
                                     const TruncationSpec& trunc, std::vector<double> level_grid,
                                     double lambda);
ChangePointEstimate five_step_gradual(const SamplePath& path, const RhoFunction& rho,
                                      const TruncationSpec& trunc, std::vector<double> level_grid,
                                      const FiveStepConfig& config, const MultiplierSpec& mult,
                                      RngStream& rng);

}  // namespace jumpcp
