#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dynrgg/geometry.hpp"

namespace dynrgg {

/// Per-step-pair isolated-vertex bookkeeping. Built from the isolated *sets*
/// of two consecutive snapshots, so k1_before = d + s_count and
/// k1_after = s_count + b hold exactly by construction.
struct TransitionStats {
    std::int64_t b{0};        // became isolated
    std::int64_t d{0};        // stopped being isolated
    std::int64_t s_count{0};  // isolated at both steps
    std::int64_t k1_before{0};
    std::int64_t k1_after{0};
};

/// Both arguments are ascending index sets over the same agent universe.
TransitionStats classify_transition(const std::vector<std::int32_t>& isolated_before,
                                    const std::vector<std::int32_t>& isolated_after);

enum class Connectivity : std::uint8_t { disconnected = 0, connected = 1 };

/// One maximal run of constant connectivity. Runs touching either end of the
/// observation window are censored (complete == false) and excluded from
/// period-length means.
struct PeriodRecord {
    Connectivity kind{Connectivity::disconnected};
    std::int64_t start_step{0};
    std::int64_t length{0};
    bool complete{false};
};

/// Run-length encoding of a per-step connectivity sequence. The first and
/// last runs are always censored; lengths sum to the sequence length.
/// Throws std::invalid_argument on an empty sequence.
std::vector<PeriodRecord> record_connectivity(const std::vector<std::uint8_t>& connected);

/// Mergeable integer aggregate. merge() is field-wise and exact; floating
/// summaries are computed only at finalization.
struct Aggregate {
    std::uint64_t count{0};
    std::int64_t sum{0};
    std::int64_t sum_of_squares{0};
    std::map<std::int64_t, std::uint64_t> histogram;

    void add(std::int64_t value) {
        ++count;
        sum += value;
        sum_of_squares += value * value;
        ++histogram[value];
    }

    void merge(const Aggregate& other) {
        count += other.count;
        sum += other.sum;
        sum_of_squares += other.sum_of_squares;
        for (const auto& [v, c] : other.histogram) histogram[v] += c;
    }

    double mean() const { return count == 0 ? 0.0 : static_cast<double>(sum) / count; }
    double variance() const; // unbiased; 0 when count < 2
};

struct MeanCi {
    double mean{0.0};
    double half_width{0.0}; // 1.96 * sample sd / sqrt(count)
};

/// Flagged (nullopt) when count < 2.
std::optional<MeanCi> mean_ci(const Aggregate& agg);

/// Goodness of fit of a count histogram against Poisson(lambda) on the bins
/// {0, 1, 2, >=3}, plus the mean/variance ratio diagnostics.
struct PoissonFit {
    bool valid{false}; // false when the sample is too small (or empty)
    std::uint64_t total{0};
    double empirical_mean{0.0};
    double empirical_variance{0.0};
    double mean_ratio{0.0};     // empirical mean / lambda
    double var_mean_ratio{0.0}; // empirical variance / empirical mean
    double chi_square{0.0};
    double p_value{0.0};
};

/// Throws std::invalid_argument unless lambda > 0.
PoissonFit poisson_fit(const std::map<std::int64_t, std::uint64_t>& histogram, double lambda,
                       std::uint64_t min_total = 500);

/// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_square_tail(double statistic, int df);

struct GofResult {
    double statistic{0.0};
    double p_value{0.0};
};

/// One-sample Kolmogorov-Smirnov test against Uniform[0,1); asymptotic
/// p-value with the usual small-sample effective-n correction.
GofResult ks_uniform(std::vector<double> sample);

/// Chi-squared uniformity test of points on a k x k torus grid.
GofResult chi_square_uniform_grid(const std::vector<Point>& points, int cells_per_axis);

} // namespace dynrgg
