#include "dynrgg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_cdf.h>

namespace dynrgg {

TransitionStats classify_transition(const std::vector<std::int32_t>& isolated_before,
                                    const std::vector<std::int32_t>& isolated_after) {
    TransitionStats t;
    t.k1_before = static_cast<std::int64_t>(isolated_before.size());
    t.k1_after = static_cast<std::int64_t>(isolated_after.size());
    std::size_t i = 0, j = 0;
    while (i < isolated_before.size() && j < isolated_after.size()) {
        if (isolated_before[i] == isolated_after[j]) {
            ++t.s_count;
            ++i;
            ++j;
        } else if (isolated_before[i] < isolated_after[j]) {
            ++t.d;
            ++i;
        } else {
            ++t.b;
            ++j;
        }
    }
    t.d += static_cast<std::int64_t>(isolated_before.size() - i);
    t.b += static_cast<std::int64_t>(isolated_after.size() - j);
    return t;
}

std::vector<PeriodRecord> record_connectivity(const std::vector<std::uint8_t>& connected) {
    if (connected.empty()) {
        throw std::invalid_argument("record_connectivity: empty sequence");
    }
    std::vector<PeriodRecord> runs;
    std::int64_t start = 0;
    for (std::size_t t = 1; t <= connected.size(); ++t) {
        if (t == connected.size() || connected[t] != connected[start]) {
            runs.push_back({connected[start] ? Connectivity::connected
                                             : Connectivity::disconnected,
                            start, static_cast<std::int64_t>(t) - start, true});
            start = static_cast<std::int64_t>(t);
        }
    }
    runs.front().complete = false;
    runs.back().complete = false;
    return runs;
}

double Aggregate::variance() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = static_cast<double>(sum) / n;
    return (static_cast<double>(sum_of_squares) - n * m * m) / (n - 1.0);
}

std::optional<MeanCi> mean_ci(const Aggregate& agg) {
    if (agg.count < 2) return std::nullopt;
    MeanCi ci;
    ci.mean = agg.mean();
    ci.half_width = 1.96 * std::sqrt(agg.variance() / static_cast<double>(agg.count));
    return ci;
}

PoissonFit poisson_fit(const std::map<std::int64_t, std::uint64_t>& histogram, double lambda,
                       std::uint64_t min_total) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson_fit: lambda must be positive");

    PoissonFit fit;
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t observed[4] = {0, 0, 0, 0};
    for (const auto& [value, count] : histogram) {
        if (value < 0) throw std::invalid_argument("poisson_fit: negative count value");
        fit.total += count;
        sum += static_cast<double>(value) * count;
        sum_sq += static_cast<double>(value) * value * count;
        observed[std::min<std::int64_t>(value, 3)] += count;
    }
    if (fit.total < min_total) return fit; // flagged: insufficient sample

    const double n = static_cast<double>(fit.total);
    fit.empirical_mean = sum / n;
    fit.empirical_variance = (sum_sq - n * fit.empirical_mean * fit.empirical_mean) / (n - 1.0);
    fit.mean_ratio = fit.empirical_mean / lambda;
    fit.var_mean_ratio =
        fit.empirical_mean > 0.0 ? fit.empirical_variance / fit.empirical_mean : 0.0;

    const double p0 = std::exp(-lambda);
    const double probs[4] = {p0, lambda * p0, 0.5 * lambda * lambda * p0,
                             1.0 - p0 * (1.0 + lambda + 0.5 * lambda * lambda)};
    fit.chi_square = 0.0;
    for (int bin = 0; bin < 4; ++bin) {
        const double expected = n * probs[bin];
        const double diff = static_cast<double>(observed[bin]) - expected;
        fit.chi_square += diff * diff / expected;
    }
    fit.p_value = chi_square_tail(fit.chi_square, 3);
    fit.valid = true;
    return fit;
}

double chi_square_tail(double statistic, int df) {
    if (df < 1) throw std::invalid_argument("chi_square_tail: df must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return gsl_cdf_chisq_Q(statistic, static_cast<double>(df));
}

namespace {

// Kolmogorov distribution tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 lambda^2}
double kolmogorov_tail(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double total = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        total += sign * term;
        if (term < 1e-12 * std::max(total, 1e-12)) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * total));
}

} // namespace

GofResult ks_uniform(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("ks_uniform: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double x = sample[i];
        d = std::max(d, (i + 1) / n - x);
        d = std::max(d, x - i / n);
    }
    const double sqrt_n = std::sqrt(n);
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    return {d, kolmogorov_tail(lambda)};
}

GofResult chi_square_uniform_grid(const std::vector<Point>& points, int cells_per_axis) {
    if (cells_per_axis < 2) {
        throw std::invalid_argument("chi_square_uniform_grid: need >= 2 cells per axis");
    }
    const int k = cells_per_axis;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k) * k, 0);
    for (const Point& p : points) {
        const int cx = std::min(static_cast<int>(p.x * k), k - 1);
        const int cy = std::min(static_cast<int>(p.y * k), k - 1);
        ++counts[static_cast<std::size_t>(cy) * k + cx];
    }
    const double expected = static_cast<double>(points.size()) / (k * k);
    if (expected < 5.0) {
        throw std::invalid_argument("chi_square_uniform_grid: fewer than 5 expected per cell");
    }
    GofResult res;
    for (std::int64_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        res.statistic += diff * diff / expected;
    }
    res.p_value = chi_square_tail(res.statistic, k * k - 1);
    return res;
}

} // namespace dynrgg
