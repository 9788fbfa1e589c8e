#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "jumpcp/bootstrap.hpp"
#include "jumpcp/grids.hpp"
#include "jumpcp/rho.hpp"
#include "jumpcp/rng.hpp"
#include "jumpcp/truncation.hpp"
#include "jumpcp/weights.hpp"

#include "support.hpp"

using namespace jumpcp;
using testsupport::bf_cusum_sup;
using testsupport::bf_cusum_sup_at;
using testsupport::bf_variation_sup;
using testsupport::bf_variation_sup_at;
using testsupport::random_path;

namespace {

const RhoFunction kRho{1.0, 2.0};
const TruncationSpec kTrunc{1.0, 0.75};

IncrementWeights random_weights(std::mt19937_64& gen, std::size_t n) {
    const SamplePath path = random_path(gen, n, 0.2, std::pow(0.2, 0.75));
    return IncrementWeights::build(path, kRho, kTrunc, level_grid_fine());
}

std::vector<double> random_multipliers(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xi(n);
    for (double& x : xi) x = normal(gen);
    return xi;
}

}  // namespace

TEST_CASE("sup engines equal full scans exactly, plain and tilted") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(gen() % 46);  // 5..50
        const IncrementWeights w = random_weights(gen, n);
        const std::vector<double> xi = random_multipliers(gen, n);

        for (const auto kind : {PrefixField::Kind::plain, PrefixField::Kind::squared}) {
            const PrefixField field(w, kind, xi);
            CHECK(field.cusum_sup() == bf_cusum_sup(field));
            CHECK(field.variation_sup(w.n) == bf_variation_sup(field, w.n));
            // Partial ranges and single levels, including empty and tiny ones.
            for (const std::size_t k_max : {std::size_t{0}, std::size_t{1}, n / 2, n}) {
                CHECK(field.variation_sup(k_max) == bf_variation_sup(field, k_max));
                CHECK(field.variation_sup_at(0, k_max) == bf_variation_sup_at(field, 0, k_max));
                CHECK(field.variation_sup_at(17, k_max) == bf_variation_sup_at(field, 17, k_max));
            }
            CHECK(field.cusum_sup_at(9) == bf_cusum_sup_at(field, 9));
            CHECK(field.cusum_sup_at(29) == bf_cusum_sup_at(field, 29));
        }
    }
}

TEST_CASE("sup engines equal full scans exactly on dense survivor sets") {
    // Larger n with many survivors pushes the scan past the pair-scan cutoff
    // into the hull path; exactness must be unchanged.
    std::mt19937_64 gen(515);
    const std::size_t n = 400;
    const IncrementWeights w = random_weights(gen, n);
    REQUIRE(w.candidate_steps.size() > 128);
    const std::vector<double> xi = random_multipliers(gen, n);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    CHECK(field.cusum_sup() == bf_cusum_sup(field));
    CHECK(field.variation_sup(w.n) == bf_variation_sup(field, w.n));
    CHECK(field.variation_sup(w.n / 3) == bf_variation_sup(field, w.n / 3));
    const PrefixField plain(w, PrefixField::Kind::plain);
    CHECK(plain.variation_sup(w.n) == bf_variation_sup(plain, w.n));
}

TEST_CASE("independent recomputation agrees to rounding noise") {
    std::mt19937_64 gen(99);
    const IncrementWeights w = random_weights(gen, 80);
    const auto grid = level_grid_fine();
    for (std::size_t k : {std::size_t{7}, std::size_t{40}, std::size_t{80}}) {
        const double theta = static_cast<double>(k) / 80.0;
        for (double t : {0.5, 1.5, 3.0}) {
            const double lib = cusum(w, theta, t);
            const double ref = testsupport::naive_cusum(w, kRho, k, t);
            CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("free sup wrappers scale the field sups by the right constants") {
    std::mt19937_64 gen(10);
    const IncrementWeights w = random_weights(gen, 64);
    const PrefixField field(w, PrefixField::Kind::plain);
    CHECK(cusum_sup(w) == field.cusum_sup() / w.scale_root());
    CHECK(cusum_sup_at(w, 1.0) == field.cusum_sup_at(9) / w.scale_root());
    CHECK(time_variation_sup(w, 1.0) == field.variation_sup(w.n) / w.horizon());
    CHECK(time_variation_sup_at(w, 0.75, 2.0) ==
          field.variation_sup_at(19, w.step_of(0.75)) / w.horizon());
}

TEST_CASE("unit multipliers collapse the bootstrap onto the data statistics") {
    std::mt19937_64 gen(123);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + static_cast<std::size_t>(gen() % 90);
        const IncrementWeights w = random_weights(gen, n);
        const std::vector<double> ones(n, 1.0);

        for (double theta : {0.25, 0.5, 1.0}) {
            for (double t : {0.5, 1.0, 3.0}) {
                // Cusum: both sides divide the same table value by the same
                // constant, so the match is bitwise.
                CHECK(bootstrap_cusum(w, ones, theta, t) == cusum(w, theta, t));
                // Variation: the data statistic carries 1/(n delta_n) and the
                // bootstrap 1/sqrt(n delta_n); relative agreement only.
                CHECK(bootstrap_variation(w, ones, 0.25 * theta, theta, t) ==
                      doctest::Approx(time_variation(w, 0.25 * theta, theta, t) * w.scale_root())
                          .epsilon(1e-12));
            }
            CHECK(bootstrap_variation_sup(w, ones, theta) ==
                  doctest::Approx(time_variation_sup(w, theta) * w.scale_root()).epsilon(1e-12));
        }
        CHECK(bootstrap_cusum_sup(w, ones) == cusum_sup(w));
        CHECK(bootstrap_cusum_sup_at(w, ones, 1.0) == cusum_sup_at(w, 1.0));
        CHECK(bootstrap_variation_sup_at(w, ones, 1.0, 2.8) ==
              doctest::Approx(time_variation_sup_at(w, 1.0, 2.8) * w.scale_root())
                  .epsilon(1e-12));
    }
}

TEST_CASE("bootstrap draws are centered versions of the tilted field") {
    // With random xi the bootstrap cusum equals the tilted-field cusum point:
    // the centering term (k/n) P_n already sits inside the shared kernel.
    std::mt19937_64 gen(321);
    const std::size_t n = 60;
    const IncrementWeights w = random_weights(gen, n);
    const std::vector<double> xi = random_multipliers(gen, n);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    for (double theta : {0.3, 0.7}) {
        const std::size_t k = w.step_of(theta);
        CHECK(bootstrap_cusum(w, xi, theta, 1.0) ==
              field.cusum_point(9, k) / w.scale_root());
    }
    CHECK(bootstrap_cusum_sup(w, xi) == field.cusum_sup() / w.scale_root());
    CHECK(bootstrap_variation_sup(w, xi, 0.8) ==
          field.variation_sup(w.step_of(0.8)) / w.scale_root());
}

TEST_CASE("multiplier draws: determinism, moments, support") {
    RngStream rng_a = RngStream::derive(5, 1, StreamRole::multipliers, 0);
    RngStream rng_b = RngStream::derive(5, 1, StreamRole::multipliers, 0);
    const auto ga = draw_multipliers(1000, MultiplierKind::gaussian, rng_a);
    const auto gb = draw_multipliers(1000, MultiplierKind::gaussian, rng_b);
    CHECK(ga == gb);

    RngStream rng_c(9);
    const auto rade = draw_multipliers(100000, MultiplierKind::rademacher, rng_c);
    double sum = 0.0;
    for (double x : rade) {
        CHECK((x == 1.0 || x == -1.0));
        sum += x;
    }
    CHECK(std::fabs(sum) / 100000.0 < 0.02);

    RngStream rng_d(1);
    const auto ones = draw_multipliers(17, MultiplierKind::constant_one, rng_d);
    for (double x : ones) CHECK(x == 1.0);

    CHECK(to_string(MultiplierKind::gaussian) == "gaussian");
    CHECK(multiplier_kind_from_string("rademacher") == MultiplierKind::rademacher);
    CHECK_THROWS_AS(multiplier_kind_from_string("cauchy"), std::invalid_argument);
    const MultiplierSpec no_draws{MultiplierKind::gaussian, 0};
    CHECK_THROWS_AS(no_draws.validate(), std::invalid_argument);
}

TEST_CASE("empirical quantile has order-statistic rank semantics") {
    // Rank = ceil(level * B) with a 1e-9 slack, clamped to [1, B].
    CHECK(empirical_quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);       // ceil(1.5) = 2nd
    CHECK(empirical_quantile({3.0, 1.0, 2.0}, 1.0 / 3.0) == 1.0); // ~1.0 rank slack
    CHECK(empirical_quantile({3.0, 1.0, 2.0}, 0.34) == 2.0);      // ceil above slack
    CHECK(empirical_quantile({5.0}, 0.99) == 5.0);
    CHECK(empirical_quantile({5.0, 7.0}, 0.001) == 5.0);          // rank clamps to 1
    CHECK(empirical_quantile({5.0, 7.0}, 0.999) == 7.0);
    CHECK_THROWS_AS(empirical_quantile({5.0, 7.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_quantile({5.0, 7.0}, 1.0), std::invalid_argument);
    // Duplicates are counted with multiplicity.
    CHECK(empirical_quantile({2.0, 2.0, 2.0, 9.0}, 0.75) == 2.0);
    // 0.95 * 200 = 190 exactly despite binary rounding.
    std::vector<double> ladder(200);
    for (std::size_t i = 0; i < 200; ++i) ladder[i] = static_cast<double>(i + 1);
    CHECK(empirical_quantile(ladder, 0.95) == 190.0);
    CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("kolmogorov distribution: frozen values and quantile inversion") {
    CHECK(kolmogorov_cdf(1.0) == doctest::Approx(0.73000032832264548).epsilon(1e-12));
    CHECK(kolmogorov_cdf(0.0) == 0.0);
    CHECK(kolmogorov_cdf(-1.0) == 0.0);
    CHECK(kolmogorov_cdf(10.0) == doctest::Approx(1.0).epsilon(1e-15));
    // Monotone.
    double prev = 0.0;
    for (double x = 0.1; x <= 3.0; x += 0.1) {
        const double v = kolmogorov_cdf(x);
        CHECK(v >= prev);
        prev = v;
    }
    // Frozen quantiles from an independent bisection oracle.
    CHECK(ks_quantile(0.05) == doctest::Approx(1.3580986393225506).epsilon(1e-9));
    CHECK(ks_quantile(0.10) == doctest::Approx(1.2238478702170824).epsilon(1e-9));
    CHECK(ks_quantile(0.50) == doctest::Approx(0.82757355518990769).epsilon(1e-9));
    for (double alpha : {0.01, 0.05, 0.25}) {
        CHECK(kolmogorov_cdf(ks_quantile(alpha)) == doctest::Approx(1.0 - alpha).epsilon(1e-9));
    }
    CHECK_THROWS_AS(ks_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ks_quantile(1.0), std::invalid_argument);
}

TEST_CASE("gaussian and rademacher multipliers give compatible quantiles") {
    // Same data, two multiplier laws: the bootstrap sup quantiles estimate the
    // same conditional law, so they must agree within Monte Carlo error.
    std::mt19937_64 gen(888);
    const IncrementWeights w = random_weights(gen, 300);
    const std::size_t B = 400;
    std::vector<double> gauss(B), rade(B), xi(w.n);
    RngStream rng(77);
    for (std::size_t b = 0; b < B; ++b) {
        draw_multipliers(xi, MultiplierKind::gaussian, rng);
        gauss[b] = bootstrap_cusum_sup(w, xi);
        draw_multipliers(xi, MultiplierKind::rademacher, rng);
        rade[b] = bootstrap_cusum_sup(w, xi);
    }
    const double qg = empirical_quantile(gauss, 0.9);
    const double qr = empirical_quantile(rade, 0.9);
    CHECK(qg == doctest::Approx(qr).epsilon(0.15));
}
