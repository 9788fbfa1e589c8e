#include "jumpcp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jumpcp/grids.hpp"

namespace jumpcp {

namespace {

// Above this many candidate columns the triangle scan switches from the exact
// pairwise sweep to convex-hull queries.
constexpr std::size_t kPairScanMax = 128;

// Every statistic is p1 - ratio * p2 for prefix values and a ratio; routing all
// evaluations through one expression keeps sup engines and point queries
// bitwise identical.
inline double affine_residual(double p1, double ratio, double p2) { return p1 - ratio * p2; }

inline double step_ratio(std::size_t k1, std::size_t k2) {
    return k1 == k2 ? 1.0 : static_cast<double>(k1) / static_cast<double>(k2);
}

// Upper or lower convex hull over points pushed with strictly increasing x,
// queried for the vertex extremizing y - s*x. The value search is unimodal
// along a hull; near-ties may land one vertex off, which callers absorb by
// re-evaluating the neighbors canonically.
class HullChain {
  public:
    explicit HullChain(bool upper) : upper_(upper) {}

    void clear() {
        xs_.clear();
        ys_.clear();
    }

    void push(double x, double y) {
        while (xs_.size() >= 2) {
            const std::size_t k = xs_.size();
            const double cross = (xs_[k - 1] - xs_[k - 2]) * (y - ys_[k - 2]) -
                                 (ys_[k - 1] - ys_[k - 2]) * (x - xs_[k - 2]);
            const bool drop = upper_ ? cross >= 0.0 : cross <= 0.0;
            if (!drop) break;
            xs_.pop_back();
            ys_.pop_back();
        }
        xs_.push_back(x);
        ys_.push_back(y);
    }

    bool empty() const { return xs_.empty(); }
    std::size_t size() const { return xs_.size(); }
    double x(std::size_t i) const { return xs_[i]; }
    double y(std::size_t i) const { return ys_[i]; }

    std::size_t peak(double s) const {
        std::size_t lo = 0;
        std::size_t hi = xs_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const double here = ys_[mid] - s * xs_[mid];
            const double next = ys_[mid + 1] - s * xs_[mid + 1];
            const bool advance = upper_ ? here < next : here > next;
            if (advance)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

  private:
    bool upper_;
    std::vector<double> xs_, ys_;
};

}  // namespace

IncrementWeights IncrementWeights::build(const SamplePath& path, const RhoFunction& rho,
                                         const TruncationSpec& trunc,
                                         std::vector<double> level_grid) {
    rho.validate();
    trunc.validate();
    if (path.n == 0 || path.values.size() != path.n + 1)
        throw std::invalid_argument("weights: path with n >= 1 increments required");
    if (level_grid.empty()) throw std::invalid_argument("weights: level grid must be nonempty");
    if (!std::is_sorted(level_grid.begin(), level_grid.end()))
        throw std::invalid_argument("weights: level grid must be sorted");

    IncrementWeights w;
    w.n = path.n;
    w.delta_n = path.delta_n;
    w.threshold = trunc.threshold(path.delta_n);
    w.levels = std::move(level_grid);
    w.increments.resize(w.n);

    for (std::size_t i = 1; i <= w.n; ++i) {
        const double dx = path.values[i] - path.values[i - 1];
        w.increments[i - 1] = dx;
        if (std::abs(dx) > w.threshold) {
            w.survivor_index.push_back(i);
            w.survivor_increment.push_back(dx);
            const double weight = rho(dx);
            w.survivor_weight.push_back(weight);
            w.survivor_weight_sq.push_back(weight * weight);
            const auto it = std::lower_bound(w.levels.begin(), w.levels.end(), dx);
            w.survivor_slot.push_back(static_cast<std::size_t>(it - w.levels.begin()));
        }
    }

    w.candidate_steps.push_back(0);
    for (const std::size_t s : w.survivor_index) {
        w.candidate_steps.push_back(s - 1);
        w.candidate_steps.push_back(s);
    }
    w.candidate_steps.push_back(w.n);
    std::sort(w.candidate_steps.begin(), w.candidate_steps.end());
    w.candidate_steps.erase(std::unique(w.candidate_steps.begin(), w.candidate_steps.end()),
                            w.candidate_steps.end());
    w.candidate_pos.reserve(w.candidate_steps.size());
    for (const std::size_t c : w.candidate_steps) w.candidate_pos.push_back(w.position(c));
    return w;
}

double IncrementWeights::scale_root() const { return std::sqrt(horizon()); }

std::size_t IncrementWeights::position(std::size_t k) const {
    return static_cast<std::size_t>(
        std::upper_bound(survivor_index.begin(), survivor_index.end(), k) -
        survivor_index.begin());
}

double IncrementWeights::weight_at(std::size_t i, std::size_t u) const {
    if (i == 0 || i > n) throw std::out_of_range("weights: increment index out of range");
    if (u >= levels.size()) throw std::out_of_range("weights: level index out of range");
    const auto it = std::lower_bound(survivor_index.begin(), survivor_index.end(), i);
    if (it == survivor_index.end() || *it != i) return 0.0;
    const std::size_t p = static_cast<std::size_t>(it - survivor_index.begin());
    return survivor_slot[p] <= u ? survivor_weight[p] : 0.0;
}

std::size_t IncrementWeights::step_of(double theta) const {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("weights: theta must lie in [0, 1]");
    const double scaled = theta * static_cast<double>(n);
    const double nearest = std::nearbyint(scaled);
    double chosen = std::abs(scaled - nearest) <= 1e-6 ? nearest : std::floor(scaled);
    if (chosen < 0.0) chosen = 0.0;
    if (chosen > static_cast<double>(n)) chosen = static_cast<double>(n);
    return static_cast<std::size_t>(chosen);
}

double IncrementWeights::partial_plain(std::size_t u, std::size_t k) const {
    if (u >= levels.size()) throw std::out_of_range("weights: level index out of range");
    if (k > n) throw std::out_of_range("weights: step out of range");
    const std::size_t pos = position(k);
    double acc = 0.0;
    for (std::size_t p = 0; p < pos; ++p)
        acc += survivor_slot[p] <= u ? survivor_weight[p] : 0.0;
    return acc;
}

double IncrementWeights::partial_squared(std::size_t u, std::size_t k) const {
    if (u >= levels.size()) throw std::out_of_range("weights: level index out of range");
    if (k > n) throw std::out_of_range("weights: step out of range");
    const std::size_t pos = position(k);
    double acc = 0.0;
    for (std::size_t p = 0; p < pos; ++p)
        acc += survivor_slot[p] <= u ? survivor_weight_sq[p] : 0.0;
    return acc;
}

void PrefixField::assign(const IncrementWeights& w, Kind kind) {
    w_ = &w;
    levels_ = w.levels.size();
    stride_ = w.survivors() + 1;
    table_.resize(levels_ * stride_);
    const std::vector<double>& vals =
        kind == Kind::squared ? w.survivor_weight_sq : w.survivor_weight;
    for (std::size_t u = 0; u < levels_; ++u) {
        double* out = table_.data() + u * stride_;
        out[0] = 0.0;
        for (std::size_t p = 0; p + 1 < stride_; ++p)
            out[p + 1] = out[p] + (w.survivor_slot[p] <= u ? vals[p] : 0.0);
    }
}

void PrefixField::assign(const IncrementWeights& w, Kind kind, std::span<const double> xi) {
    if (xi.size() != w.n)
        throw std::invalid_argument("prefix field: one multiplier per increment required");
    const std::vector<double>& vals =
        kind == Kind::squared ? w.survivor_weight_sq : w.survivor_weight;
    tilted_.resize(w.survivors());
    for (std::size_t p = 0; p < w.survivors(); ++p)
        tilted_[p] = xi[w.survivor_index[p] - 1] * vals[p];

    w_ = &w;
    levels_ = w.levels.size();
    stride_ = w.survivors() + 1;
    table_.resize(levels_ * stride_);
    for (std::size_t u = 0; u < levels_; ++u) {
        double* out = table_.data() + u * stride_;
        out[0] = 0.0;
        for (std::size_t p = 0; p + 1 < stride_; ++p)
            out[p + 1] = out[p] + (w.survivor_slot[p] <= u ? tilted_[p] : 0.0);
    }
}

double PrefixField::partial(std::size_t u, std::size_t k) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    if (k > w_->n) throw std::out_of_range("prefix field: step out of range");
    return row(u)[w_->position(k)];
}

double PrefixField::total(std::size_t u) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    return row(u)[stride_ - 1];
}

double PrefixField::cusum_point(std::size_t u, std::size_t k) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    if (k > w_->n) throw std::out_of_range("prefix field: step out of range");
    const double* r = row(u);
    return affine_residual(r[w_->position(k)], step_ratio(k, w_->n), r[stride_ - 1]);
}

double PrefixField::variation_point(std::size_t u, std::size_t k1, std::size_t k2) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    if (k1 > k2 || k2 > w_->n)
        throw std::invalid_argument("prefix field: need k1 <= k2 <= n");
    const double* r = row(u);
    return affine_residual(r[w_->position(k1)], step_ratio(k1, k2), r[w_->position(k2)]);
}

double PrefixField::cusum_scan_level(std::size_t u) const {
    const double* r = row(u);
    const double tot = r[stride_ - 1];
    const auto& steps = w_->candidate_steps;
    const auto& pos = w_->candidate_pos;
    double best = 0.0;
    for (std::size_t c = 0; c < steps.size(); ++c) {
        const double f = affine_residual(r[pos[c]], step_ratio(steps[c], w_->n), tot);
        best = std::max(best, std::abs(f));
    }
    return best;
}

double PrefixField::cusum_sup() const {
    double best = 0.0;
    for (std::size_t u = 0; u < levels_; ++u) best = std::max(best, cusum_scan_level(u));
    return best;
}

double PrefixField::cusum_sup_at(std::size_t u) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    return cusum_scan_level(u);
}

double PrefixField::scan_level(std::size_t u, std::size_t k_max) const {
    const auto& steps = w_->candidate_steps;
    const auto& pos = w_->candidate_pos;
    const double* r = row(u);
    const std::size_t count = static_cast<std::size_t>(
        std::upper_bound(steps.begin(), steps.end(), k_max) - steps.begin());
    const bool boundary = steps[count - 1] != k_max;

    double best = 0.0;
    if (count + (boundary ? 1 : 0) <= kPairScanMax) {
        auto scan_column = [&](std::size_t k2, double p2, std::size_t limit) {
            const double x2 = static_cast<double>(k2);
            for (std::size_t a = 0; a < limit; ++a) {
                const double ratio = static_cast<double>(steps[a]) / x2;
                best = std::max(best, std::abs(affine_residual(r[pos[a]], ratio, p2)));
            }
        };
        for (std::size_t b = 1; b < count; ++b) scan_column(steps[b], r[pos[b]], b);
        if (boundary && k_max > 0) scan_column(k_max, r[w_->position(k_max)], count);
        return best;
    }

    HullChain upper(true), lower(false);
    auto query_column = [&](std::size_t k2, double p2, const HullChain& hull) {
        const double x2 = static_cast<double>(k2);
        const double slope = p2 / x2;
        const std::size_t at = hull.peak(slope);
        const std::size_t from = at == 0 ? 0 : at - 1;
        const std::size_t to = std::min(at + 1, hull.size() - 1);
        for (std::size_t v = from; v <= to; ++v) {
            const double ratio = hull.x(v) / x2;
            best = std::max(best, std::abs(affine_residual(hull.y(v), ratio, p2)));
        }
    };
    for (std::size_t b = 0; b < count; ++b) {
        const double x = static_cast<double>(steps[b]);
        const double y = r[pos[b]];
        if (b > 0) {
            query_column(steps[b], y, upper);
            query_column(steps[b], y, lower);
        }
        upper.push(x, y);
        lower.push(x, y);
    }
    if (boundary && k_max > 0) {
        const double p2 = r[w_->position(k_max)];
        query_column(k_max, p2, upper);
        query_column(k_max, p2, lower);
    }
    return best;
}

double PrefixField::variation_sup(std::size_t k_max) const {
    if (k_max > w_->n) throw std::out_of_range("prefix field: step out of range");
    double best = 0.0;
    for (std::size_t u = 0; u < levels_; ++u) best = std::max(best, scan_level(u, k_max));
    return best;
}

double PrefixField::variation_sup_at(std::size_t u, std::size_t k_max) const {
    if (u >= levels_) throw std::out_of_range("prefix field: level index out of range");
    if (k_max > w_->n) throw std::out_of_range("prefix field: step out of range");
    return scan_level(u, k_max);
}

double empirical_levy_df(const IncrementWeights& w, double theta, double t) {
    const std::size_t u = level_index(w.levels, t);
    return w.partial_plain(u, w.step_of(theta)) / w.horizon();
}

double cusum(const IncrementWeights& w, double theta, double t) {
    const std::size_t u = level_index(w.levels, t);
    const std::size_t k = w.step_of(theta);
    const double residual =
        affine_residual(w.partial_plain(u, k), step_ratio(k, w.n), w.partial_plain(u, w.n));
    return residual / w.scale_root();
}

double cusum_sup(const IncrementWeights& w) {
    const PrefixField field(w, PrefixField::Kind::plain);
    return field.cusum_sup() / w.scale_root();
}

double cusum_sup_at(const IncrementWeights& w, double t0) {
    const std::size_t u = level_index(w.levels, t0);
    const PrefixField field(w, PrefixField::Kind::plain);
    return field.cusum_sup_at(u) / w.scale_root();
}

double pointwise_pivot(const IncrementWeights& w, double t0) {
    const std::size_t u = level_index(w.levels, t0);
    const double mass = w.partial_squared(u, w.n) / w.horizon();
    if (!(mass > 0.0)) return 0.0;
    const PrefixField field(w, PrefixField::Kind::plain);
    return field.cusum_sup_at(u) / w.scale_root() / std::sqrt(mass);
}

double time_variation(const IncrementWeights& w, double kappa, double theta, double t) {
    if (kappa > theta) throw std::invalid_argument("time variation: kappa must not exceed theta");
    const std::size_t u = level_index(w.levels, t);
    const std::size_t k1 = w.step_of(kappa);
    const std::size_t k2 = w.step_of(theta);
    const double residual =
        affine_residual(w.partial_plain(u, k1), step_ratio(k1, k2), w.partial_plain(u, k2));
    return residual / w.horizon();
}

double time_variation_sup(const IncrementWeights& w, double theta) {
    const PrefixField field(w, PrefixField::Kind::plain);
    return field.variation_sup(w.step_of(theta)) / w.horizon();
}

double time_variation_sup_at(const IncrementWeights& w, double theta, double t0) {
    const std::size_t u = level_index(w.levels, t0);
    const PrefixField field(w, PrefixField::Kind::plain);
    return field.variation_sup_at(u, w.step_of(theta)) / w.horizon();
}

}  // namespace jumpcp
