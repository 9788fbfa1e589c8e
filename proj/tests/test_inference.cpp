#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "jumpcp/bootstrap.hpp"
#include "jumpcp/grids.hpp"
#include "jumpcp/inference.hpp"
#include "jumpcp/rng.hpp"
#include "jumpcp/simulate.hpp"
#include "jumpcp/truncation.hpp"
#include "jumpcp/weights.hpp"

#include "support.hpp"

using namespace jumpcp;
using testsupport::path_from_increments;
using testsupport::random_path;

namespace {

const RhoFunction kRho{1.0, 2.0};
const TruncationSpec kTrunc{1.0, 0.75};
const MultiplierSpec kOnes{MultiplierKind::constant_one, 4};
const MultiplierSpec kGauss{MultiplierKind::gaussian, 100};

IncrementWeights random_weights(std::mt19937_64& gen, std::size_t n, double delta_n = 0.2) {
    const SamplePath path = random_path(gen, n, delta_n, std::pow(delta_n, 0.75));
    return IncrementWeights::build(path, kRho, kTrunc, level_grid_fine());
}

IncrementWeights dead_weights(std::size_t n = 12) {
    // Every increment sits below the truncation threshold: no survivors.
    const std::vector<double> increments(n, 0.01);
    return IncrementWeights::build(path_from_increments(increments, 0.25), kRho, kTrunc,
                                   level_grid_fine());
}

}  // namespace

TEST_CASE("method names are stable strings") {
    CHECK(to_string(TestMethod::abrupt_global) == "abrupt_global");
    CHECK(to_string(TestMethod::abrupt_pointwise_boot) == "abrupt_pointwise_boot");
    CHECK(to_string(TestMethod::abrupt_pointwise_exact) == "abrupt_pointwise_exact");
    CHECK(to_string(TestMethod::gradual_global) == "gradual_global");
    CHECK(to_string(TestMethod::gradual_pointwise) == "gradual_pointwise");
    CHECK(to_string(EstimatorMethod::argmax_global) == "argmax_global");
    CHECK(to_string(EstimatorMethod::argmax_pointwise) == "argmax_pointwise");
    CHECK(to_string(EstimatorMethod::gradual_threshold) == "gradual_threshold");
    CHECK(to_string(EstimatorMethod::five_step) == "five_step");
}

TEST_CASE("unit multipliers force rejection through the >= convention") {
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 5; ++trial) {
        const IncrementWeights w = random_weights(gen, 40);
        RngStream rng(7);

        const TestReport global = test_abrupt_global(w, 0.05, kOnes, rng);
        CHECK(global.statistic == cusum_sup(w));
        CHECK(global.critical_value == global.statistic);
        CHECK(global.reject);
        CHECK_FALSE(global.degenerate);
        CHECK(global.replications == 4);
        CHECK_FALSE(global.t0.has_value());

        const TestReport point = test_abrupt_pointwise_boot(w, 1.0, 0.05, kOnes, rng);
        CHECK(point.statistic == cusum_sup_at(w, 1.0));
        CHECK(point.critical_value == point.statistic);
        CHECK(point.reject);
        CHECK(point.t0 == 1.0);

        const TestReport grad = test_gradual_global(w, 0.05, kOnes, rng);
        CHECK(grad.statistic ==
              doctest::Approx(time_variation_sup(w, 1.0) * w.scale_root()).epsilon(1e-12));
        CHECK(grad.reject);

        const TestReport gpoint = test_gradual_pointwise(w, 2.8, 0.05, kOnes, rng);
        CHECK(gpoint.critical_value == gpoint.statistic);
        CHECK(gpoint.reject);
    }
}

TEST_CASE("exact pointwise test pivots against the Kolmogorov law") {
    std::mt19937_64 gen(2);
    const IncrementWeights w = random_weights(gen, 50);
    const TestReport report = test_abrupt_pointwise_exact(w, 1.0, 0.05);
    CHECK(report.statistic == pointwise_pivot(w, 1.0));
    CHECK(report.critical_value == doctest::Approx(1.3580986393225506).epsilon(1e-9));
    CHECK(report.replications == 0);
    CHECK(report.reject == (report.statistic >= report.critical_value));
    CHECK(report.t0 == 1.0);

    // Alpha moves the critical value, not the statistic.
    const TestReport loose = test_abrupt_pointwise_exact(w, 1.0, 0.5);
    CHECK(loose.statistic == report.statistic);
    CHECK(loose.critical_value < report.critical_value);
}

TEST_CASE("degenerate data is flagged; zero draws trip the >= convention") {
    // All-zero weights: statistic and every bootstrap draw are 0, so the
    // critical value is 0 and 0 >= 0 rejects. The degenerate flag is the
    // caller's signal that the decision carries no information. The exact
    // test keeps its positive analytic quantile and cannot reject.
    const IncrementWeights w = dead_weights();
    RngStream rng(3);
    const TestReport global = test_abrupt_global(w, 0.05, kGauss, rng);
    CHECK(global.degenerate);
    CHECK(global.statistic == 0.0);
    CHECK(global.critical_value == 0.0);
    CHECK(global.reject);

    const TestReport point = test_abrupt_pointwise_boot(w, 0.5, 0.05, kGauss, rng);
    CHECK(point.degenerate);
    CHECK(point.statistic == 0.0);
    CHECK(point.reject);

    const TestReport exact = test_abrupt_pointwise_exact(w, 0.5, 0.05);
    CHECK(exact.degenerate);
    CHECK_FALSE(exact.reject);
    CHECK(exact.statistic == 0.0);
    CHECK(exact.critical_value > 1.0);

    const TestReport grad = test_gradual_global(w, 0.05, kGauss, rng);
    CHECK(grad.degenerate);
    CHECK(grad.statistic == 0.0);
    CHECK(grad.reject);
}

TEST_CASE("tests validate alpha and B") {
    std::mt19937_64 gen(4);
    const IncrementWeights w = random_weights(gen, 20);
    RngStream rng(1);
    CHECK_THROWS_AS(test_abrupt_global(w, 0.0, kGauss, rng), std::invalid_argument);
    CHECK_THROWS_AS(test_abrupt_global(w, 1.0, kGauss, rng), std::invalid_argument);
    const MultiplierSpec empty{MultiplierKind::gaussian, 0};
    CHECK_THROWS_AS(test_abrupt_global(w, 0.05, empty, rng), std::invalid_argument);
    CHECK_THROWS_AS(test_abrupt_pointwise_boot(w, 0.17, 0.05, kGauss, rng),
                    std::invalid_argument);  // off-grid level
}

TEST_CASE("argmax estimator: ties break to the smallest maximizer") {
    // n = 8 and plateau weights keep every cusum value exact in binary: two
    // identical survivors at indices 2 and 6 put the peak magnitude 2 at both
    // k = 2 and k = 6. The smaller step must win.
    std::vector<double> increments(8, 0.0);
    increments[1] = 2.0;  // index 2, rho(2) = plateau = 4
    increments[5] = 2.0;  // index 6
    const SamplePath path = path_from_increments(increments, 0.25);
    const IncrementWeights w = IncrementWeights::build(path, kRho, kTrunc, level_grid_fine());
    const ChangePointEstimate est = estimate_abrupt(w);
    CHECK(est.theta_hat == 0.25);
    CHECK(est.method == EstimatorMethod::argmax_global);
    CHECK_FALSE(est.degenerate);
    REQUIRE(!est.curve.empty());
    // Curve is sampled in strictly ascending theta.
    for (std::size_t i = 1; i < est.curve.size(); ++i)
        CHECK(est.curve[i].theta > est.curve[i - 1].theta);
}

TEST_CASE("argmax estimator matches a naive scan and is scale invariant") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 15 + static_cast<std::size_t>(gen() % 30);
        const IncrementWeights w = random_weights(gen, n);
        const ChangePointEstimate est = estimate_abrupt(w);

        // Naive: smallest k maximizing the sup over levels of |cusum_point|.
        const PrefixField field(w, PrefixField::Kind::plain);
        double best = 0.0;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k <= w.n; ++k) {
            double mag = 0.0;
            for (std::size_t u = 0; u < w.levels.size(); ++u)
                mag = std::max(mag, std::fabs(field.cusum_point(u, k)));
            if (mag > best) {
                best = mag;
                best_k = k;
            }
        }
        CHECK(est.theta_hat == static_cast<double>(best_k) / static_cast<double>(w.n));

        // Doubling rho rescales the curve by exactly 2 and keeps the argmax.
        const RhoFunction doubled{2.0, 2.0};
        const IncrementWeights w2 = IncrementWeights::build(
            path_from_increments(w.increments, w.delta_n), doubled, kTrunc, level_grid_fine());
        const ChangePointEstimate est2 = estimate_abrupt(w2);
        CHECK(est2.theta_hat == est.theta_hat);
    }
}

TEST_CASE("argmax estimator: pointwise variant and degenerate data") {
    std::mt19937_64 gen(6);
    const IncrementWeights w = random_weights(gen, 30);
    const ChangePointEstimate grid = estimate_abrupt(w);
    const ChangePointEstimate at = estimate_abrupt(w, 1.0);
    CHECK(at.method == EstimatorMethod::argmax_pointwise);
    // The pointwise curve is dominated by the grid curve.
    const PrefixField field(w, PrefixField::Kind::plain);
    const std::size_t k_at = w.step_of(at.theta_hat);
    CHECK(std::fabs(field.cusum_point(9, k_at)) <= field.cusum_sup() + 1e-15);

    const ChangePointEstimate dead = estimate_abrupt(dead_weights());
    CHECK(dead.degenerate);
    CHECK(dead.theta_hat == 0.0);
}

TEST_CASE("gradual threshold estimator: edges, monotonicity, exact counting") {
    std::mt19937_64 gen(7);
    const IncrementWeights w = random_weights(gen, 25);

    // Huge lambda: the indicator is always satisfied.
    const ChangePointEstimate all = estimate_gradual(w, 1e12);
    CHECK(all.theta_hat == 1.0);
    CHECK(all.threshold_used == 1e12);
    CHECK(all.method == EstimatorMethod::gradual_threshold);

    // Negative or non-finite lambda is rejected; zero is legal.
    CHECK_THROWS_AS(estimate_gradual(w, -1.0), std::invalid_argument);
    const ChangePointEstimate zero = estimate_gradual(w, 0.0);
    CHECK(zero.theta_hat >= 0.0);

    // theta_hat equals the exact lattice count of sub-threshold statistics,
    // evaluated with the estimator's own scaling so boundary ties agree.
    const PrefixField field(w, PrefixField::Kind::plain);
    auto count_fraction = [&](double lambda) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < w.n; ++i) {
            const double s = field.variation_sup(i) / w.scale_root();
            count += s <= lambda ? 1 : 0;
        }
        return static_cast<double>(count) / static_cast<double>(w.n);
    };
    double prev = 0.0;
    for (double lambda : {0.0, 0.05, 0.2, 0.5, 1.0, 3.0, 10.0}) {
        const ChangePointEstimate est = estimate_gradual(w, lambda);
        CHECK(est.theta_hat == count_fraction(lambda));
        CHECK(est.theta_hat >= prev);  // nondecreasing in lambda
        prev = est.theta_hat;
    }

    // Identically zero decision curve: theta_hat = 1 and the degenerate flag.
    const ChangePointEstimate dead = estimate_gradual(dead_weights(), 0.0);
    CHECK(dead.theta_hat == 1.0);
    CHECK(dead.degenerate);
}

TEST_CASE("threshold selection: determinism and the unit-multiplier fixed point") {
    std::mt19937_64 gen(8);
    const IncrementWeights w = random_weights(gen, 40);

    RngStream rng_a = RngStream::derive(2, 0, StreamRole::multipliers, 0);
    RngStream rng_b = RngStream::derive(2, 0, StreamRole::multipliers, 0);
    const double lam_a = select_threshold(w, 0.1, 0.10, 0.3, kGauss, rng_a);
    const double lam_b = select_threshold(w, 0.1, 0.10, 0.3, kGauss, rng_b);
    CHECK(lam_a == lam_b);
    CHECK(lam_a >= 0.0);

    // With xi = 1 every bootstrap draw collapses to the data statistic, so the
    // quantile equals pow(statistic, r) no matter alpha or B.
    RngStream rng_c(5);
    const double stat = time_variation_sup(w, 0.1) * w.scale_root();
    const double lam_ones = select_threshold(w, 0.1, 0.10, 0.3, kOnes, rng_c);
    CHECK(lam_ones == doctest::Approx(std::pow(stat, 0.3)).epsilon(1e-12));

    CHECK_THROWS_AS(select_threshold(w, 0.0, 0.10, 0.3, kGauss, rng_c), std::invalid_argument);
    CHECK_THROWS_AS(select_threshold(w, 0.1, 0.10, 0.0, kGauss, rng_c), std::invalid_argument);
}

TEST_CASE("five-step pipeline: wiring, determinism, degenerate data") {
    std::mt19937_64 gen(9);
    const IncrementWeights w = IncrementWeights::build(
        random_path(gen, 60, 0.2, std::pow(0.2, 0.75)), kRho, kTrunc, level_grid_coarse());
    const FiveStepConfig config;

    RngStream rng_a = RngStream::derive(3, 1, StreamRole::multipliers, 0);
    RngStream rng_b = RngStream::derive(3, 1, StreamRole::multipliers, 0);
    const ChangePointEstimate est = five_step_gradual(w, config, kGauss, rng_a);
    const ChangePointEstimate rerun = five_step_gradual(w, config, kGauss, rng_b);
    CHECK(est.theta_hat == rerun.theta_hat);
    CHECK(est.method == EstimatorMethod::five_step);
    REQUIRE(est.threshold_initial.has_value());
    REQUIRE(est.threshold_used.has_value());
    REQUIRE(est.intermediate.has_value());
    CHECK(*rerun.threshold_initial == *est.threshold_initial);
    CHECK(*rerun.threshold_used == *est.threshold_used);
    CHECK(*rerun.intermediate == *est.intermediate);

    // The intermediate estimate is what the fixed threshold alone would give.
    const ChangePointEstimate first = estimate_gradual(w, *est.threshold_initial);
    CHECK(*est.intermediate == first.theta_hat);
    // And the final one reuses the re-selected threshold.
    const ChangePointEstimate second = estimate_gradual(w, *est.threshold_used);
    CHECK(est.theta_hat == second.theta_hat);

    // With unit multipliers both selection rounds are closed form.
    RngStream rng_c(11);
    const ChangePointEstimate ones = five_step_gradual(w, config, kOnes, rng_c);
    const double s_pre = time_variation_sup(w, config.theta_pre) * w.scale_root();
    CHECK(*ones.threshold_initial == doctest::Approx(std::pow(s_pre, config.r)).epsilon(1e-12));
    const double s_mid = time_variation_sup(w, *ones.intermediate) * w.scale_root();
    CHECK(*ones.threshold_used == doctest::Approx(std::pow(s_mid, config.r)).epsilon(1e-12));

    // All-dead data: thresholds zero, estimate pinned to 1.
    RngStream rng_d(13);
    const ChangePointEstimate dead = five_step_gradual(dead_weights(), config, kGauss, rng_d);
    CHECK(dead.theta_hat == 1.0);
    CHECK(dead.degenerate);

    FiveStepConfig bad;
    bad.theta_pre = 0.0;
    CHECK_THROWS_AS(five_step_gradual(w, bad, kGauss, rng_d), std::invalid_argument);
}

TEST_CASE("path-level wrappers agree with the weights-level cores") {
    SimConfig sim;
    sim.n = 300;
    sim.horizon = 15.0;
    const SamplePath path = simulate_path(sim, 41, 0);
    const IncrementWeights fine =
        IncrementWeights::build(path, kRho, kTrunc, level_grid_fine());

    RngStream rng_a = RngStream::derive(41, 0, StreamRole::multipliers, 0);
    RngStream rng_b = RngStream::derive(41, 0, StreamRole::multipliers, 0);
    const TestReport via_path =
        test_abrupt_global(path, kRho, kTrunc, level_grid_fine(), 0.05, kGauss, rng_a);
    const TestReport via_weights = test_abrupt_global(fine, 0.05, kGauss, rng_b);
    CHECK(via_path.statistic == via_weights.statistic);
    CHECK(via_path.critical_value == via_weights.critical_value);
    CHECK(via_path.reject == via_weights.reject);

    const ChangePointEstimate ea = estimate_abrupt(path, kRho, kTrunc, level_grid_fine());
    CHECK(ea.theta_hat == estimate_abrupt(fine).theta_hat);

    const IncrementWeights coarse =
        IncrementWeights::build(path, kRho, kTrunc, level_grid_coarse());
    const ChangePointEstimate eg = estimate_gradual(path, kRho, kTrunc, level_grid_coarse(), 0.4);
    CHECK(eg.theta_hat == estimate_gradual(coarse, 0.4).theta_hat);
}

TEST_CASE("pivot statistic is invariant under rho rescaling") {
    std::mt19937_64 gen(10);
    const SamplePath path = random_path(gen, 45, 0.2, std::pow(0.2, 0.75));
    const IncrementWeights base = IncrementWeights::build(path, kRho, kTrunc, level_grid_fine());
    const RhoFunction doubled{2.0, 2.0};
    const IncrementWeights twice =
        IncrementWeights::build(path, doubled, kTrunc, level_grid_fine());
    // V = sup|T| / sqrt(N_{rho^2}): numerator scales by 2, denominator by 2.
    CHECK(pointwise_pivot(base, 1.0) ==
          doctest::Approx(pointwise_pivot(twice, 1.0)).epsilon(1e-12));
}
