#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynrgg/graph.hpp"
#include "dynrgg/stats.hpp"
#include "dynrgg/theory.hpp"

namespace dynrgg {

enum class Mode { static_census, dynamic_run, q_table, theory, validate };
enum class OutputFormat { csv, json };

/// Harness configuration. The primary knobs are mu (rather than r) and
/// target_qn (rather than s); resolved r and s are always echoed in outputs.
/// Exactly one of (r, mu) must be set, and for dynamic runs exactly one of
/// (s, target_qn).
struct ExperimentConfig {
    Mode mode{Mode::theory};
    std::int64_t n{2000};
    std::optional<double> mu;
    std::optional<double> r;
    std::optional<double> s;
    std::optional<double> target_qn;
    std::int64_t m{10};
    std::int64_t trials{0};
    std::int64_t steps{0};
    double epsilon{0.25};
    int ell_max{4};
    std::uint64_t seed{42};
    std::string out;
    OutputFormat format{OutputFormat::csv};
    std::vector<double> sr_grid;                // q-table s/r values
    std::map<std::string, double> tolerances;   // validate overrides
    bool quick{false};
    std::vector<int> only;                      // validate criterion subset
};

/// Parse a JSON config document (same field names as ExperimentConfig) into
/// `cfg`, overriding only the fields present. Throws std::invalid_argument
/// on malformed input.
void apply_config_json(ExperimentConfig& cfg, const std::string& json_text);

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct ResolvedParams {
    double r{0.0};
    double s{0.0};
    double mu{0.0};
    double qn{0.0};
    bool r_from_mu{false};
    bool s_from_target_qn{false};
};

/// Resolve (r, mu) and optionally (s, target_qn). Throws std::invalid_argument
/// when the exactly-one constraints are violated.
ResolvedParams resolve_params(const ExperimentConfig& cfg, bool need_s);

// ---- static-census ----

struct StaticTrialRow {
    std::int64_t trial{0};
    std::uint8_t connected{0};
    std::int32_t k1{0};
    std::int32_t component_count{0};
    std::int32_t largest{0};
    std::int32_t k2{0};
    std::int32_t kprime2{0};
    std::int32_t ktilde2{0};
};

struct StaticReport {
    ExperimentConfig config;
    ResolvedParams params;
    std::vector<StaticTrialRow> rows;
    std::uint64_t connected_count{0};
    std::uint64_t ktilde2_positive{0};
    Aggregate k1_agg;
    std::map<int, Aggregate> k_ell_agg;   // sizes 2..ell_max
    std::map<int, Aggregate> k_prime_agg; // sizes 2..ell_max
    PoissonFit k1_fit;                    // against Poisson(mu)
};

/// `trials` independent uniform placements; graph, labeling, census each.
/// Trial i draws from the substream derive_stream(seed, i), so results are
/// independent of the worker schedule.
StaticReport run_static_experiment(const ExperimentConfig& cfg);

// ---- dynamic-run ----

struct DynamicTrialRow {
    std::int64_t trial{0};
    std::uint8_t connected_before{0};
    std::uint8_t connected_after{0};
    TransitionStats transition;
};

struct DynamicSummary {
    std::int64_t step_pairs{0};
    double mean_b{0.0}, mean_d{0.0}, mean_s{0.0};
    double se_b{0.0}, se_d{0.0}, se_s{0.0};
    std::int64_t identity_violations{0};
    std::int64_t count_cc{0}, count_cd{0}, count_dc{0}, count_dd{0};
    double corr_bd{0.0}, corr_bs{0.0}, corr_ds{0.0};
    // long-trace only
    std::int64_t steps_connected{0};    // snapshots where C holds
    std::int64_t dc_transitions{0};     // D -> C flips
    std::optional<MeanCi> period_c;     // complete connected periods
    std::optional<MeanCi> period_d;
    std::int64_t complete_c_count{0}, complete_d_count{0};
    std::int64_t censored_c_steps{0}, censored_d_steps{0};
    TheoryPrediction theory;
};

struct DynamicReport {
    ExperimentConfig config;
    ResolvedParams params;
    bool long_trace{true};
    std::vector<PeriodRecord> periods;       // long-trace mode
    std::vector<DynamicTrialRow> trial_rows; // many-trials mode
    Aggregate b_agg, d_agg, s_agg;
    Aggregate complete_c_lengths, complete_d_lengths;
    DynamicSummary summary;
};

/// Long-trace mode (steps > 0): one trajectory, per-step isolated sets and
/// connectivity, periods, B/D/S aggregates. Many-trials mode (trials > 0):
/// independent worlds observed over a single step each. Exactly one of
/// steps/trials must be positive.
DynamicReport run_dynamic_experiment(const ExperimentConfig& cfg);

// ---- theory / q-table ----

struct TheoryTable {
    ExperimentConfig config;
    ResolvedParams params;
    std::vector<TheoryPrediction> rows;
};

/// mode == theory: one row at the resolved (n, r, s).
/// mode == q_table: one row per s/r in the grid (default
/// {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20}).
TheoryTable emit_theory_table(const ExperimentConfig& cfg);

// ---- serialization ----

std::string to_csv(const StaticReport& report);
std::string to_csv(const DynamicReport& report);
std::string to_csv(const TheoryTable& table);
std::string to_json_text(const StaticReport& report);
std::string to_json_text(const DynamicReport& report);
std::string to_json_text(const TheoryTable& table);

/// %.9g, with "inf"/"nan" spelled out.
std::string fmt_g9(double v);

/// Write to the path, or stdout when the path is empty.
void write_output(const std::string& path, const std::string& text);

} // namespace dynrgg
