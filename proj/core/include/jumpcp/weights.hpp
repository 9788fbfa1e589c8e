#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jumpcp/rho.hpp"
#include "jumpcp/sample_path.hpp"
#include "jumpcp/truncation.hpp"

namespace jumpcp {

// Sparse form of the truncated weight matrix w_i(t) = rho(dx_i) 1{dx_i <= t}
// 1{|dx_i| > v_n}. Only survivors (|dx_i| > v_n) are stored; every statistic
// below is a function of survivor prefix sums, which are constant in i between
// survivors. candidate_steps holds {0, n} plus {s-1, s} per survivor index s:
// each statistic is monotone in i along a survivor-free stretch (the prefix term
// is constant, the drift or ratio term is monotone, and correctly rounded
// arithmetic preserves monotonicity), so every sup over i in {0..n} is attained
// on the candidate set, exactly, also in floating point.
struct IncrementWeights {
    std::size_t n = 0;
    double delta_n = 0.0;
    double threshold = 0.0;          // v_n actually applied
    std::vector<double> levels;      // sorted level grid
    std::vector<double> increments;  // all n signed increments

    std::vector<std::size_t> survivor_index;   // ascending, 1-based increment indices
    std::vector<double> survivor_increment;    // signed
    std::vector<double> survivor_weight;       // rho(dx)
    std::vector<double> survivor_weight_sq;    // rho(dx)^2
    std::vector<std::size_t> survivor_slot;    // first u with dx <= levels[u]; |levels| if none
    std::vector<std::size_t> candidate_steps;  // sorted unique stretch endpoints in [0, n]
    std::vector<std::size_t> candidate_pos;    // survivor count at each candidate step

    static IncrementWeights build(const SamplePath& path, const RhoFunction& rho,
                                  const TruncationSpec& trunc, std::vector<double> level_grid);

    std::size_t survivors() const { return survivor_index.size(); }
    double horizon() const { return static_cast<double>(n) * delta_n; }
    double scale_root() const;  // sqrt(n delta_n)

    // number of survivors with index <= k
    std::size_t position(std::size_t k) const;

    // w_i(levels[u]) for any increment index i in 1..n
    double weight_at(std::size_t i, std::size_t u) const;

    // floor(n theta), snapping products that sit within 1e-6 of an integer so
    // theta values that are i/n after rounding land on step i
    std::size_t step_of(double theta) const;

    // partial sums over increments 1..k at level u, accumulated in survivor order
    double partial_plain(std::size_t u, std::size_t k) const;
    double partial_squared(std::size_t u, std::size_t k) const;
};

// Per-level survivor prefix-sum table of one weighting, optionally tilted by a
// multiplier vector. Sup engines and point queries evaluate one shared affine
// kernel on the same table, so they agree bitwise, and a multiplier field with
// xi = 1 reproduces the plain field exactly.
class PrefixField {
  public:
    enum class Kind { plain, squared };

    PrefixField() = default;
    PrefixField(const IncrementWeights& w, Kind kind) { assign(w, kind); }
    PrefixField(const IncrementWeights& w, Kind kind, std::span<const double> xi) {
        assign(w, kind, xi);
    }

    void assign(const IncrementWeights& w, Kind kind);
    // xi has one multiplier per increment; only survivor entries contribute
    void assign(const IncrementWeights& w, Kind kind, std::span<const double> xi);

    const IncrementWeights& weights() const { return *w_; }
    std::size_t level_count() const { return levels_; }

    // P_k(u): weighted sum over increments 1..k at level u
    double partial(std::size_t u, std::size_t k) const;
    double total(std::size_t u) const;

    // P_k(u) - (k/n) P_n(u)
    double cusum_point(std::size_t u, std::size_t k) const;
    // P_k1(u) - (k1/k2) P_k2(u) with 0/0 := 1; requires k1 <= k2
    double variation_point(std::size_t u, std::size_t k1, std::size_t k2) const;

    // sup over steps {0..n} (all levels / one level) of |cusum_point|, in P units
    double cusum_sup() const;
    double cusum_sup_at(std::size_t u) const;

    // sup over levels (all / one) and 0 <= k1 <= k2 <= k_max of |variation_point|,
    // in P units; exact over the full integer triangle
    double variation_sup(std::size_t k_max) const;
    double variation_sup_at(std::size_t u, std::size_t k_max) const;

  private:
    const double* row(std::size_t u) const { return table_.data() + u * stride_; }
    double scan_level(std::size_t u, std::size_t k_max) const;
    double cusum_scan_level(std::size_t u) const;

    const IncrementWeights* w_ = nullptr;
    std::size_t levels_ = 0;
    std::size_t stride_ = 0;  // survivors + 1
    std::vector<double> table_;
    std::vector<double> tilted_;  // scratch for multiplier assigns
};

// Statistics in their natural scales; real-valued theta is snapped via step_of,
// levels are resolved against the grid stored in the weights.
double empirical_levy_df(const IncrementWeights& w, double theta, double t);
double cusum(const IncrementWeights& w, double theta, double t);
double cusum_sup(const IncrementWeights& w);
double cusum_sup_at(const IncrementWeights& w, double t0);
// V statistic: sup_theta |T(theta, t0)| / sqrt(N_{rho^2}(1, t0)), 0 when the
// denominator vanishes
double pointwise_pivot(const IncrementWeights& w, double t0);
double time_variation(const IncrementWeights& w, double kappa, double theta, double t);
double time_variation_sup(const IncrementWeights& w, double theta);
double time_variation_sup_at(const IncrementWeights& w, double theta, double t0);

}  // namespace jumpcp
