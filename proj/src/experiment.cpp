#include "dynrgg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "dynrgg/mobility.hpp"
#include "dynrgg/rng.hpp"
#include "json.hpp"

namespace dynrgg {

namespace {

using nlohmann::json;

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::small_s: return "small_s";
        case Regime::theta_r: return "theta_r";
        case Regime::large_s: return "large_s";
    }
    return "?";
}

const char* method_name(QMethod method, bool converged) {
    if (method == QMethod::quadrature && !converged) return "quadrature_failed";
    switch (method) {
        case QMethod::closed_form: return "closed_form";
        case QMethod::quadrature: return "quadrature";
        case QMethod::montecarlo: return "montecarlo";
    }
    return "?";
}

std::vector<double> default_sr_grid() {
    return {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
}

json config_json(const ExperimentConfig& cfg, const ResolvedParams& params, bool with_s) {
    json j;
    j["mode"] = mode_name(cfg.mode);
    j["n"] = cfg.n;
    j["r"] = params.r;
    j["mu"] = params.mu;
    j["r_from_mu"] = params.r_from_mu;
    if (with_s) {
        j["s"] = params.s;
        j["qn"] = params.qn;
        j["s_from_target_qn"] = params.s_from_target_qn;
        j["m"] = cfg.m;
    }
    j["trials"] = cfg.trials;
    j["steps"] = cfg.steps;
    j["epsilon"] = cfg.epsilon;
    j["ell_max"] = cfg.ell_max;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    return j;
}

json ci_json(const std::optional<MeanCi>& ci) {
    json j;
    j["available"] = ci.has_value();
    if (ci) {
        j["mean"] = ci->mean;
        j["half_width"] = ci->half_width;
    }
    return j;
}

double pearson(std::int64_t n, std::int64_t sx, std::int64_t sy, std::int64_t sxx,
               std::int64_t syy, std::int64_t sxy) {
    const double nd = static_cast<double>(n);
    const double cov = nd * static_cast<double>(sxy) - static_cast<double>(sx) * static_cast<double>(sy);
    const double vx = nd * static_cast<double>(sxx) - static_cast<double>(sx) * static_cast<double>(sx);
    const double vy = nd * static_cast<double>(syy) - static_cast<double>(sy) * static_cast<double>(sy);
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

} // namespace

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::static_census: return "static-census";
        case Mode::dynamic_run: return "dynamic-run";
        case Mode::q_table: return "q-table";
        case Mode::theory: return "theory";
        case Mode::validate: return "validate";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    if (name == "static-census") return Mode::static_census;
    if (name == "dynamic-run") return Mode::dynamic_run;
    if (name == "q-table") return Mode::q_table;
    if (name == "theory") return Mode::theory;
    if (name == "validate") return Mode::validate;
    throw std::invalid_argument("unknown mode: " + name);
}

void apply_config_json(ExperimentConfig& cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

    if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    if (j.contains("n")) cfg.n = j.at("n").get<std::int64_t>();
    if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
    if (j.contains("r")) cfg.r = j.at("r").get<double>();
    if (j.contains("s")) cfg.s = j.at("s").get<double>();
    if (j.contains("target_qn")) cfg.target_qn = j.at("target_qn").get<double>();
    if (j.contains("m")) cfg.m = j.at("m").get<std::int64_t>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::int64_t>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<std::int64_t>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("ell_max")) cfg.ell_max = j.at("ell_max").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("format")) {
        const std::string f = j.at("format").get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw std::invalid_argument("config: format must be csv or json");
    }
    if (j.contains("sr_grid")) cfg.sr_grid = j.at("sr_grid").get<std::vector<double>>();
    if (j.contains("tolerances")) {
        cfg.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    }
    if (j.contains("quick")) cfg.quick = j.at("quick").get<bool>();
    if (j.contains("only")) cfg.only = j.at("only").get<std::vector<int>>();
}

ResolvedParams resolve_params(const ExperimentConfig& cfg, bool need_s) {
    if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (cfg.r.has_value() == cfg.mu.has_value()) {
        throw std::invalid_argument("config: exactly one of r, mu must be given");
    }
    ResolvedParams p;
    if (cfg.r) {
        p.r = *cfg.r;
        if (!(p.r > 0.0)) throw std::invalid_argument("config: r must be positive");
        p.mu = mu_of(cfg.n, p.r);
    } else {
        p.mu = *cfg.mu;
        p.r = radius_for_mu(cfg.n, p.mu);
        p.r_from_mu = true;
    }
    if (!need_s) return p;

    if (cfg.s.has_value() == cfg.target_qn.has_value()) {
        throw std::invalid_argument("config: exactly one of s, target_qn must be given");
    }
    if (cfg.s) {
        p.s = *cfg.s;
        if (!(p.s >= 0.0)) throw std::invalid_argument("config: s must be >= 0");
        p.qn = q_exact(p.r, p.s).value * static_cast<double>(cfg.n);
    } else {
        p.qn = *cfg.target_qn;
        p.s = invert_qn(cfg.n, p.r, p.qn);
        p.s_from_target_qn = true;
    }
    return p;
}

// ---- static-census ----

StaticReport run_static_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("static-census: trials must be >= 1");
    StaticReport rep;
    rep.config = cfg;
    rep.params = resolve_params(cfg, /*need_s=*/false);

    const std::int64_t trials = cfg.trials;
    const std::int64_t n = cfg.n;
    const int ell_max = cfg.ell_max;
    rep.rows.resize(static_cast<std::size_t>(trials));
    // per-trial K_ell / K'_ell values for sizes 2..ell_max, merged in order
    const int nl = ell_max - 1;
    std::vector<std::int32_t> kell_flat(static_cast<std::size_t>(trials) * nl);
    std::vector<std::int32_t> kprime_flat(static_cast<std::size_t>(trials) * nl);

#pragma omp parallel
    {
        std::vector<Point> points(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t trial = 0; trial < trials; ++trial) {
            SplitMix64 rng(derive_stream(cfg.seed, static_cast<std::uint64_t>(trial)));
            for (Point& p : points) {
                p.x = rng.next_double();
                p.y = rng.next_double();
            }
            const Graph g = build_rgg(points, rep.params.r);
            const ComponentLabeling lab = connected_components(g);
            const CensusReport census =
                component_census(points, g, lab, cfg.epsilon, ell_max);

            StaticTrialRow row;
            row.trial = trial;
            row.connected = is_connected(lab) ? 1 : 0;
            row.k1 = census.k1;
            row.component_count = lab.component_count;
            row.largest = census.largest_size;
            row.k2 = census.k_ell.at(2);
            row.kprime2 = census.k_prime.at(2);
            row.ktilde2 = census.k_tilde.at(2);
            rep.rows[static_cast<std::size_t>(trial)] = row;
            for (int l = 2; l <= ell_max; ++l) {
                kell_flat[static_cast<std::size_t>(trial) * nl + (l - 2)] =
                    census.k_ell.count(l) ? census.k_ell.at(l) : 0;
                kprime_flat[static_cast<std::size_t>(trial) * nl + (l - 2)] =
                    census.k_prime.at(l);
            }
        }
    }

    for (int l = 2; l <= ell_max; ++l) {
        rep.k_ell_agg[l] = Aggregate{};
        rep.k_prime_agg[l] = Aggregate{};
    }
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const StaticTrialRow& row = rep.rows[static_cast<std::size_t>(trial)];
        rep.connected_count += row.connected;
        rep.ktilde2_positive += row.ktilde2 > 0 ? 1 : 0;
        rep.k1_agg.add(row.k1);
        for (int l = 2; l <= ell_max; ++l) {
            rep.k_ell_agg[l].add(kell_flat[static_cast<std::size_t>(trial) * nl + (l - 2)]);
            rep.k_prime_agg[l].add(kprime_flat[static_cast<std::size_t>(trial) * nl + (l - 2)]);
        }
    }
    rep.k1_fit = poisson_fit(rep.k1_agg.histogram, rep.params.mu);
    return rep;
}

// ---- dynamic-run ----

namespace {

void positions_of(const WorldState& w, std::vector<Point>& out) {
    out.resize(w.agents.size());
    for (std::size_t i = 0; i < w.agents.size(); ++i) out[i] = w.agents[i].position;
}

struct PairSums {
    std::int64_t b{0}, d{0}, s{0};
    std::int64_t bb{0}, dd{0}, ss{0};
    std::int64_t bd{0}, bs{0}, ds{0};

    void add(const TransitionStats& t) {
        b += t.b;
        d += t.d;
        s += t.s_count;
        bb += t.b * t.b;
        dd += t.d * t.d;
        ss += t.s_count * t.s_count;
        bd += t.b * t.d;
        bs += t.b * t.s_count;
        ds += t.d * t.s_count;
    }
};

} // namespace

DynamicReport run_dynamic_experiment(const ExperimentConfig& cfg) {
    if ((cfg.steps > 0) == (cfg.trials > 0)) {
        throw std::invalid_argument(
            "dynamic-run: exactly one of steps (long trace) and trials must be positive");
    }
    DynamicReport rep;
    rep.config = cfg;
    rep.params = resolve_params(cfg, /*need_s=*/true);
    rep.long_trace = cfg.steps > 0;

    PairSums sums;

    if (rep.long_trace) {
        const std::int64_t steps = cfg.steps;
        WorldConfig wc{cfg.n, rep.params.r, rep.params.s, cfg.m, cfg.seed};
        WorldState world = init_world(wc);

        std::vector<Point> points;
        SnapshotScratch scratch;
        SnapshotStats prev, cur;
        positions_of(world, points);
        snapshot_stats(points, rep.params.r, scratch, prev);

        std::vector<std::uint8_t> connected;
        connected.reserve(static_cast<std::size_t>(steps) + 1);
        connected.push_back(prev.connected ? 1 : 0);

        for (std::int64_t t = 0; t < steps; ++t) {
            step_in_place(world);
            positions_of(world, points);
            snapshot_stats(points, rep.params.r, scratch, cur);

            const TransitionStats ts = classify_transition(prev.isolated, cur.isolated);
            if (ts.k1_before != ts.d + ts.s_count || ts.k1_after != ts.s_count + ts.b) {
                ++rep.summary.identity_violations;
            }
            rep.b_agg.add(ts.b);
            rep.d_agg.add(ts.d);
            rep.s_agg.add(ts.s_count);
            sums.add(ts);

            const bool was = connected.back() != 0;
            const bool now = cur.connected;
            rep.summary.count_cc += (was && now);
            rep.summary.count_cd += (was && !now);
            rep.summary.count_dc += (!was && now);
            rep.summary.count_dd += (!was && !now);
            connected.push_back(now ? 1 : 0);
            std::swap(prev, cur);
        }

        rep.periods = record_connectivity(connected);
        for (const PeriodRecord& p : rep.periods) {
            if (p.kind == Connectivity::connected) {
                if (p.complete) rep.complete_c_lengths.add(p.length);
                else rep.summary.censored_c_steps += p.length;
            } else {
                if (p.complete) rep.complete_d_lengths.add(p.length);
                else rep.summary.censored_d_steps += p.length;
            }
        }
        for (std::uint8_t c : connected) rep.summary.steps_connected += c;
        for (std::size_t t = 1; t < connected.size(); ++t) {
            if (!connected[t - 1] && connected[t]) ++rep.summary.dc_transitions;
        }
        rep.summary.step_pairs = steps;
    } else {
        const std::int64_t trials = cfg.trials;
        rep.trial_rows.resize(static_cast<std::size_t>(trials));
#pragma omp parallel
        {
            std::vector<Point> points;
            SnapshotScratch scratch;
            SnapshotStats before, after;
#pragma omp for schedule(dynamic, 8)
            for (std::int64_t trial = 0; trial < trials; ++trial) {
                WorldConfig wc{cfg.n, rep.params.r, rep.params.s, cfg.m,
                               derive_stream(cfg.seed, static_cast<std::uint64_t>(trial))};
                WorldState world = init_world(wc);
                positions_of(world, points);
                snapshot_stats(points, rep.params.r, scratch, before);
                step_in_place(world);
                positions_of(world, points);
                snapshot_stats(points, rep.params.r, scratch, after);

                DynamicTrialRow row;
                row.trial = trial;
                row.connected_before = before.connected ? 1 : 0;
                row.connected_after = after.connected ? 1 : 0;
                row.transition = classify_transition(before.isolated, after.isolated);
                rep.trial_rows[static_cast<std::size_t>(trial)] = row;
            }
        }
        for (const DynamicTrialRow& row : rep.trial_rows) {
            const TransitionStats& ts = row.transition;
            if (ts.k1_before != ts.d + ts.s_count || ts.k1_after != ts.s_count + ts.b) {
                ++rep.summary.identity_violations;
            }
            rep.b_agg.add(ts.b);
            rep.d_agg.add(ts.d);
            rep.s_agg.add(ts.s_count);
            sums.add(ts);
            rep.summary.count_cc += (row.connected_before && row.connected_after);
            rep.summary.count_cd += (row.connected_before && !row.connected_after);
            rep.summary.count_dc += (!row.connected_before && row.connected_after);
            rep.summary.count_dd += (!row.connected_before && !row.connected_after);
        }
        rep.summary.step_pairs = trials;
    }

    const std::int64_t pairs = rep.summary.step_pairs;
    if (pairs > 0) {
        rep.summary.mean_b = rep.b_agg.mean();
        rep.summary.mean_d = rep.d_agg.mean();
        rep.summary.mean_s = rep.s_agg.mean();
        const double sq = std::sqrt(static_cast<double>(pairs));
        rep.summary.se_b = std::sqrt(rep.b_agg.variance()) / sq;
        rep.summary.se_d = std::sqrt(rep.d_agg.variance()) / sq;
        rep.summary.se_s = std::sqrt(rep.s_agg.variance()) / sq;
        rep.summary.corr_bd = pearson(pairs, sums.b, sums.d, sums.bb, sums.dd, sums.bd);
        rep.summary.corr_bs = pearson(pairs, sums.b, sums.s, sums.bb, sums.ss, sums.bs);
        rep.summary.corr_ds = pearson(pairs, sums.d, sums.s, sums.dd, sums.ss, sums.ds);
    }
    rep.summary.period_c = mean_ci(rep.complete_c_lengths);
    rep.summary.period_d = mean_ci(rep.complete_d_lengths);
    rep.summary.complete_c_count = static_cast<std::int64_t>(rep.complete_c_lengths.count);
    rep.summary.complete_d_count = static_cast<std::int64_t>(rep.complete_d_lengths.count);
    rep.summary.theory = predict(cfg.n, rep.params.r, rep.params.s);
    return rep;
}

// ---- theory / q-table ----

TheoryTable emit_theory_table(const ExperimentConfig& cfg) {
    TheoryTable table;
    table.config = cfg;
    if (cfg.mode == Mode::theory) {
        table.params = resolve_params(cfg, /*need_s=*/true);
        table.rows.push_back(predict(cfg.n, table.params.r, table.params.s));
        return table;
    }
    table.params = resolve_params(cfg, /*need_s=*/false);
    const std::vector<double> grid = cfg.sr_grid.empty() ? default_sr_grid() : cfg.sr_grid;
    for (double ratio : grid) {
        if (!(ratio >= 0.0)) throw std::invalid_argument("q-table: s/r values must be >= 0");
        table.rows.push_back(predict(cfg.n, table.params.r, ratio * table.params.r));
    }
    return table;
}

// ---- serialization ----

std::string fmt_g9(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

std::string to_csv(const StaticReport& report) {
    std::string csv = "trial,connected,k1,component_count,largest_component,k_2,k_prime_2,k_tilde_2\n";
    for (const StaticTrialRow& row : report.rows) {
        csv += std::to_string(row.trial) + ',' + std::to_string(row.connected) + ',' +
               std::to_string(row.k1) + ',' + std::to_string(row.component_count) + ',' +
               std::to_string(row.largest) + ',' + std::to_string(row.k2) + ',' +
               std::to_string(row.kprime2) + ',' + std::to_string(row.ktilde2) + '\n';
    }
    return csv;
}

std::string to_csv(const DynamicReport& report) {
    std::string csv;
    if (report.long_trace) {
        csv = "kind,start_step,length,complete\n";
        for (const PeriodRecord& p : report.periods) {
            csv += std::string(p.kind == Connectivity::connected ? "C" : "D") + ',' +
                   std::to_string(p.start_step) + ',' + std::to_string(p.length) + ',' +
                   std::to_string(p.complete ? 1 : 0) + '\n';
        }
    } else {
        csv = "trial,connected_before,connected_after,b,d,s,k1_before,k1_after\n";
        for (const DynamicTrialRow& row : report.trial_rows) {
            const TransitionStats& t = row.transition;
            csv += std::to_string(row.trial) + ',' + std::to_string(row.connected_before) + ',' +
                   std::to_string(row.connected_after) + ',' + std::to_string(t.b) + ',' +
                   std::to_string(t.d) + ',' + std::to_string(t.s_count) + ',' +
                   std::to_string(t.k1_before) + ',' + std::to_string(t.k1_after) + '\n';
        }
    }
    return csv;
}

std::string to_csv(const TheoryTable& table) {
    std::string csv =
        "n,r,s,mu,q_exact,q_asymptotic,regime,qn,E_B,E_S,p_cc,p_cd,p_dd,EL_C,EL_D,q_method\n";
    for (const TheoryPrediction& t : table.rows) {
        const double inf = std::numeric_limits<double>::infinity();
        csv += std::to_string(t.n) + ',' + fmt_g9(t.r) + ',' + fmt_g9(t.s) + ',' + fmt_g9(t.mu) +
               ',' + fmt_g9(t.q) + ',' + fmt_g9(t.q_asym) + ',' + regime_name(t.regime) + ',' +
               fmt_g9(t.qn) + ',' + fmt_g9(t.expected_b) + ',' + fmt_g9(t.expected_s) + ',' +
               fmt_g9(t.joint.p_cc) + ',' + fmt_g9(t.joint.p_cd) + ',' + fmt_g9(t.joint.p_dd) +
               ',' + fmt_g9(t.periods.defined ? t.periods.el_c : inf) + ',' +
               fmt_g9(t.periods.defined ? t.periods.el_d : inf) + ',' +
               method_name(t.q_method, t.q_converged) + '\n';
    }
    return csv;
}

namespace {

json aggregate_json(const Aggregate& agg) {
    json j;
    j["count"] = agg.count;
    j["mean"] = agg.mean();
    j["variance"] = agg.variance();
    json hist = json::object();
    for (const auto& [value, count] : agg.histogram) hist[std::to_string(value)] = count;
    j["histogram"] = hist;
    return j;
}

json poisson_fit_json(const PoissonFit& fit) {
    json j;
    j["valid"] = fit.valid;
    j["total"] = fit.total;
    if (fit.valid) {
        j["empirical_mean"] = fit.empirical_mean;
        j["empirical_variance"] = fit.empirical_variance;
        j["mean_ratio"] = fit.mean_ratio;
        j["var_mean_ratio"] = fit.var_mean_ratio;
        j["chi_square"] = fit.chi_square;
        j["p_value"] = fit.p_value;
    }
    return j;
}

json theory_json(const TheoryPrediction& t) {
    json j;
    j["n"] = t.n;
    j["r"] = t.r;
    j["s"] = t.s;
    j["mu"] = t.mu;
    j["q"] = t.q;
    j["qn"] = t.qn;
    j["q_asymptotic"] = t.q_asym;
    j["regime"] = regime_name(t.regime);
    j["q_method"] = method_name(t.q_method, t.q_converged);
    j["q_std_error"] = t.q_std_error;
    j["E_B"] = t.expected_b;
    j["E_S"] = t.expected_s;
    j["p_cc"] = t.joint.p_cc;
    j["p_cd"] = t.joint.p_cd;
    j["p_dc"] = t.joint.p_dc;
    j["p_dd"] = t.joint.p_dd;
    j["EL_defined"] = t.periods.defined;
    if (t.periods.defined) {
        j["EL_C"] = t.periods.el_c;
        j["EL_D"] = t.periods.el_d;
        j["EL_C_regime_approx"] = t.periods.el_c_approx;
        j["EL_D_regime_approx"] = t.periods.el_d_approx;
    }
    j["srn"] = t.periods.srn;
    return j;
}

} // namespace

std::string to_json_text(const StaticReport& report) {
    json j;
    j["config"] = config_json(report.config, report.params, false);
    j["trials"] = report.rows.size();
    j["pr_connected"] = static_cast<double>(report.connected_count) /
                        static_cast<double>(report.rows.size());
    j["connected_count"] = report.connected_count;
    j["pr_ktilde2_positive"] = static_cast<double>(report.ktilde2_positive) /
                               static_cast<double>(report.rows.size());
    j["k1"] = aggregate_json(report.k1_agg);
    j["k1_poisson_fit"] = poisson_fit_json(report.k1_fit);
    json kl = json::object(), kp = json::object();
    for (const auto& [l, agg] : report.k_ell_agg) kl[std::to_string(l)] = aggregate_json(agg);
    for (const auto& [l, agg] : report.k_prime_agg) kp[std::to_string(l)] = aggregate_json(agg);
    j["k_ell"] = kl;
    j["k_prime"] = kp;
    json theory;
    theory["pr_connected"] = std::exp(-report.params.mu);
    const double mu = report.params.mu, p0 = std::exp(-mu);
    theory["k1_poisson_bins_0_1_2_3plus"] = {p0, mu * p0, 0.5 * mu * mu * p0,
                                             1.0 - p0 * (1.0 + mu + 0.5 * mu * mu)};
    theory["k1_mean"] = mu;
    j["theory"] = theory;
    if (report.rows.size() == 1) j["note"] = "single trial: confidence intervals unavailable";
    return j.dump(2) + "\n";
}

std::string to_json_text(const DynamicReport& report) {
    const DynamicSummary& s = report.summary;
    json j;
    j["config"] = config_json(report.config, report.params, true);
    j["mode"] = report.long_trace ? "long_trace" : "trials";
    j["step_pairs"] = s.step_pairs;
    j["identity_violations"] = s.identity_violations;
    j["empirical"]["mean_b"] = s.mean_b;
    j["empirical"]["mean_d"] = s.mean_d;
    j["empirical"]["mean_s"] = s.mean_s;
    j["empirical"]["se_b"] = s.se_b;
    j["empirical"]["se_d"] = s.se_d;
    j["empirical"]["se_s"] = s.se_s;
    j["empirical"]["corr_bd"] = s.corr_bd;
    j["empirical"]["corr_bs"] = s.corr_bs;
    j["empirical"]["corr_ds"] = s.corr_ds;
    const double pairs = static_cast<double>(std::max<std::int64_t>(s.step_pairs, 1));
    j["joint_frequencies"]["cc"] = s.count_cc / pairs;
    j["joint_frequencies"]["cd"] = s.count_cd / pairs;
    j["joint_frequencies"]["dc"] = s.count_dc / pairs;
    j["joint_frequencies"]["dd"] = s.count_dd / pairs;
    if (report.long_trace) {
        j["periods"]["complete_connected"] = ci_json(s.period_c);
        j["periods"]["complete_disconnected"] = ci_json(s.period_d);
        j["periods"]["complete_connected_count"] = s.complete_c_count;
        j["periods"]["complete_disconnected_count"] = s.complete_d_count;
        j["periods"]["censored_connected_steps"] = s.censored_c_steps;
        j["periods"]["censored_disconnected_steps"] = s.censored_d_steps;
        j["periods"]["steps_connected"] = s.steps_connected;
        j["periods"]["dc_transitions"] = s.dc_transitions;
        if (s.dc_transitions > 0) {
            j["periods"]["renewal_ratio"] =
                static_cast<double>(s.steps_connected) / static_cast<double>(s.dc_transitions);
        }
    }
    j["theory"] = theory_json(s.theory);
    return j.dump(2) + "\n";
}

std::string to_json_text(const TheoryTable& table) {
    json j;
    j["config"] = config_json(table.config, table.params, table.config.mode == Mode::theory);
    json rows = json::array();
    for (const TheoryPrediction& t : table.rows) rows.push_back(theory_json(t));
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

} // namespace dynrgg
