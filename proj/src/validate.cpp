#include "dynrgg/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "dynrgg/experiment.hpp"
#include "dynrgg/graph.hpp"
#include "dynrgg/mobility.hpp"
#include "dynrgg/rng.hpp"
#include "dynrgg/stats.hpp"
#include "dynrgg/theory.hpp"
#include "json.hpp"

namespace dynrgg {

namespace {

constexpr double kPi = std::numbers::pi;

// substream tags; each (tag, index) pair is a distinct stream of the master seed
enum StreamTag : std::uint64_t {
    kTagStatic12 = 1,
    kTagStatic3 = 2,
    kTagTraceQn1M10 = 3,
    kTagTraceQn4 = 4,
    kTagTraceM1 = 5,
    kTagTraceM100 = 6,
    kTagQOracle = 7,
    kTagInstances = 8,
    kTagStationarity = 9,
};

std::uint64_t stream_of(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
    return derive_stream(seed, (static_cast<std::uint64_t>(tag) << 32) | index);
}

std::string fmt(double v) { return fmt_g9(v); }

class Check {
  public:
    bool ok() const { return ok_; }
    const std::string& details() const { return text_; }

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok_ = false;
            if (!text_.empty()) text_ += "; ";
            text_ += what;
        }
    }

    void note(const std::string& what) {
        if (!text_.empty()) text_ += "; ";
        text_ += what;
    }

  private:
    bool ok_{true};
    std::string text_;
};

// ---- shared artifacts ----

struct StaticBatch {
    std::int64_t n{0};
    std::int64_t trials{0};
    std::int64_t connected{0};
    std::int64_t ktilde2_positive{0};
    Aggregate k1;

    double pr_connected() const { return static_cast<double>(connected) / trials; }
    double pr_ktilde2() const { return static_cast<double>(ktilde2_positive) / trials; }
    double se_connected() const {
        const double p = pr_connected();
        return std::sqrt(p * (1.0 - p) / trials);
    }
    double se_ktilde2() const {
        const double p = pr_ktilde2();
        return std::sqrt(p * (1.0 - p) / trials);
    }
};

StaticBatch run_static_batch(std::int64_t n, double r, std::int64_t trials,
                             std::uint64_t seed, StreamTag tag, std::uint64_t index_base) {
    StaticBatch batch;
    batch.n = n;
    batch.trials = trials;
    std::vector<std::int32_t> k1(static_cast<std::size_t>(trials));
    std::vector<std::uint8_t> conn(static_cast<std::size_t>(trials));
    std::vector<std::uint8_t> kt2(static_cast<std::size_t>(trials));

#pragma omp parallel
    {
        std::vector<Point> points(static_cast<std::size_t>(n));
        SnapshotScratch scratch;
        SnapshotStats snap;
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t t = 0; t < trials; ++t) {
            SplitMix64 rng(stream_of(seed, tag, index_base + static_cast<std::uint64_t>(t)));
            for (Point& p : points) {
                p.x = rng.next_double();
                p.y = rng.next_double();
            }
            snapshot_stats(points, r, scratch, snap);
            const std::int32_t iso = static_cast<std::int32_t>(snap.isolated.size());
            k1[static_cast<std::size_t>(t)] = iso;
            conn[static_cast<std::size_t>(t)] = snap.connected ? 1 : 0;
            kt2[static_cast<std::size_t>(t)] = (snap.component_count - iso) >= 2 ? 1 : 0;
        }
    }
    for (std::int64_t t = 0; t < trials; ++t) {
        batch.connected += conn[static_cast<std::size_t>(t)];
        batch.ktilde2_positive += kt2[static_cast<std::size_t>(t)];
        batch.k1.add(k1[static_cast<std::size_t>(t)]);
    }
    return batch;
}

struct Shared {
    const ValidationOptions& opt;
    std::int64_t trials12;
    std::int64_t trials3;
    std::int64_t trace_steps;

    double r2000{0.0};
    double s_qn1{0.0}, s_qn4{0.0};

    std::map<std::int64_t, StaticBatch> batch12; // criterion 1/2 batches
    std::map<std::int64_t, StaticBatch> batch3;  // criterion 3 batches
    std::map<int, DynamicReport> traces;         // keyed by StreamTag

    explicit Shared(const ValidationOptions& options) : opt(options) {
        const std::int64_t scale = opt.quick ? 10 : 1;
        trials12 = 10000 / scale;
        trials3 = 20000 / scale;
        trace_steps = 200000 / scale;
        r2000 = radius_for_mu(2000, 1.0);
        s_qn1 = invert_qn(2000, r2000, 1.0);
        s_qn4 = invert_qn(2000, r2000, 4.0);
    }

    const StaticBatch& static12(std::int64_t n) {
        auto it = batch12.find(n);
        if (it == batch12.end()) {
            const double r = radius_for_mu(n, 1.0);
            it = batch12
                     .emplace(n, run_static_batch(n, r, trials12, opt.seed, kTagStatic12,
                                                  static_cast<std::uint64_t>(n) << 20))
                     .first;
        }
        return it->second;
    }

    const StaticBatch& static3(std::int64_t n) {
        auto it = batch3.find(n);
        if (it == batch3.end()) {
            const double r = radius_for_mu(n, 1.0);
            it = batch3
                     .emplace(n, run_static_batch(n, r, trials3, opt.seed, kTagStatic3,
                                                  static_cast<std::uint64_t>(n) << 20))
                     .first;
        }
        return it->second;
    }

    const DynamicReport& trace(StreamTag tag) {
        auto it = traces.find(tag);
        if (it != traces.end()) return it->second;

        ExperimentConfig cfg;
        cfg.mode = Mode::dynamic_run;
        cfg.n = 2000;
        cfg.r = r2000;
        cfg.steps = trace_steps;
        cfg.seed = stream_of(opt.seed, tag, 0);
        switch (tag) {
            case kTagTraceQn1M10: cfg.s = s_qn1; cfg.m = 10; break;
            case kTagTraceQn4: cfg.s = s_qn4; cfg.m = 10; break;
            case kTagTraceM1: cfg.s = s_qn1; cfg.m = 1; break;
            case kTagTraceM100: cfg.s = s_qn1; cfg.m = 100; break;
            default: throw std::logic_error("not a trace tag");
        }
        return traces.emplace(tag, run_dynamic_experiment(cfg)).first->second;
    }

    /// Materialize the four traces, two at a time (each trace is sequential).
    void prefetch_traces(const std::vector<StreamTag>& tags) {
        std::vector<StreamTag> missing;
        for (StreamTag t : tags) {
            if (!traces.count(t)) missing.push_back(t);
        }
        if (missing.size() < 2) {
            for (StreamTag t : missing) trace(t);
            return;
        }
        std::vector<std::optional<DynamicReport>> slots(missing.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < missing.size(); ++i) {
            ExperimentConfig cfg;
            cfg.mode = Mode::dynamic_run;
            cfg.n = 2000;
            cfg.r = r2000;
            cfg.steps = trace_steps;
            cfg.seed = stream_of(opt.seed, missing[i], 0);
            switch (missing[i]) {
                case kTagTraceQn1M10: cfg.s = s_qn1; cfg.m = 10; break;
                case kTagTraceQn4: cfg.s = s_qn4; cfg.m = 10; break;
                case kTagTraceM1: cfg.s = s_qn1; cfg.m = 1; break;
                case kTagTraceM100: cfg.s = s_qn1; cfg.m = 100; break;
                default: break;
            }
            slots[i] = run_dynamic_experiment(cfg);
        }
        for (std::size_t i = 0; i < missing.size(); ++i) {
            traces.emplace(missing[i], std::move(*slots[i]));
        }
    }

    double tolerance(const std::string& key, double fallback) const {
        auto it = opt.tolerances.find(key);
        return it == opt.tolerances.end() ? fallback : it->second;
    }
};

// ---- criterion 1: static connectivity law ----

CriterionResult criterion1(Shared& shared) {
    CriterionResult res{1, "static_connectivity_law", false, "", {}};
    const auto start = std::chrono::steady_clock::now();
    const double tol = shared.tolerance("c1", 0.05);
    const double target = std::exp(-1.0);

    const StaticBatch& b500 = shared.static12(500);
    const StaticBatch& b2000 = shared.static12(2000);
    const StaticBatch& b8000 = shared.static12(8000);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Check check;
    const double p2000 = b2000.pr_connected();
    check.require(std::fabs(p2000 - target) <= tol,
                  "Pr(connected) at n=2000 is " + fmt(p2000) + ", outside e^-1 +- " + fmt(tol));

    const double gap500 = std::fabs(b500.pr_connected() - target);
    const double gap8000 = std::fabs(b8000.pr_connected() - target);
    const double noise = 3.0 * (b500.se_connected() + b8000.se_connected());
    check.require(gap8000 <= gap500 + noise,
                  "gap did not shrink: n=500 gap " + fmt(gap500) + " -> n=8000 gap " +
                      fmt(gap8000) + " (noise allowance " + fmt(noise) + ")");
    check.require(elapsed < 300.0, "runtime " + fmt(elapsed) + "s exceeds 5 min target");

    res.metrics["pr_connected_500"] = b500.pr_connected();
    res.metrics["pr_connected_2000"] = p2000;
    res.metrics["pr_connected_8000"] = b8000.pr_connected();
    // the isolated-vertex channel alone, for diagnosing any gap
    auto pr_k1_zero = [](const StaticBatch& b) {
        const auto it = b.k1.histogram.find(0);
        return it == b.k1.histogram.end() ? 0.0
                                          : static_cast<double>(it->second) / b.trials;
    };
    res.metrics["pr_k1_zero_2000"] = pr_k1_zero(b2000);
    res.metrics["target"] = target;
    res.metrics["tolerance"] = tol;
    res.metrics["elapsed_seconds"] = elapsed;
    res.passed = check.ok();
    res.details = check.ok()
                      ? "Pr(connected)=" + fmt(p2000) + " vs e^-1=" + fmt(target) +
                            " (tol " + fmt(tol) + "); gaps " + fmt(gap500) + " -> " + fmt(gap8000)
                      : check.details();
    return res;
}

// ---- criterion 2: Poisson isolated vertices ----

CriterionResult criterion2(Shared& shared) {
    CriterionResult res{2, "poisson_isolated_vertices", false, "", {}};
    const double p_min = shared.tolerance("c2", 0.01);
    const StaticBatch& b = shared.static12(2000);
    const PoissonFit fit = poisson_fit(b.k1.histogram, 1.0);

    Check check;
    check.require(fit.valid, "insufficient sample");
    if (fit.valid) {
        check.require(fit.empirical_mean >= 0.9 && fit.empirical_mean <= 1.1,
                      "K1 mean " + fmt(fit.empirical_mean) + " outside [0.9, 1.1]");
        check.require(fit.var_mean_ratio >= 0.85 && fit.var_mean_ratio <= 1.15,
                      "variance/mean " + fmt(fit.var_mean_ratio) + " outside [0.85, 1.15]");
        check.require(fit.p_value > p_min,
                      "chi-square p " + fmt(fit.p_value) + " <= " + fmt(p_min));
        res.metrics["k1_mean"] = fit.empirical_mean;
        res.metrics["var_mean_ratio"] = fit.var_mean_ratio;
        res.metrics["chi_square"] = fit.chi_square;
        res.metrics["p_value"] = fit.p_value;
    }
    res.passed = check.ok();
    res.details = check.ok() ? "K1 mean=" + fmt(fit.empirical_mean) + ", var/mean=" +
                                   fmt(fit.var_mean_ratio) + ", chi2 p=" + fmt(fit.p_value)
                             : check.details();
    return res;
}

// ---- criterion 3: small-component scarcity ----

CriterionResult criterion3(Shared& shared) {
    CriterionResult res{3, "small_component_scarcity", false, "", {}};
    const double factor = shared.tolerance("c3", 2.0);
    const StaticBatch& b500 = shared.static3(500);
    const StaticBatch& b2000 = shared.static3(2000);
    const StaticBatch& b8000 = shared.static3(8000);

    const double p500 = b500.pr_ktilde2();
    const double p2000 = b2000.pr_ktilde2();
    const double p8000 = b8000.pr_ktilde2();
    const double log_ratio = std::log(8000.0) / std::log(500.0);

    Check check;
    check.require(p500 > p2000 && p2000 > p8000,
                  "Pr(K~2>0) not strictly decreasing: " + fmt(p500) + ", " + fmt(p2000) + ", " +
                      fmt(p8000));
    check.require(p8000 > 0.0, "Pr(K~2>0) at n=8000 is zero; ratio undefined");
    if (p8000 > 0.0) {
        const double ratio = p500 / p8000;
        check.require(ratio >= log_ratio / factor && ratio <= log_ratio * factor,
                      "ratio " + fmt(ratio) + " outside " + fmt(log_ratio) + " x/÷ " + fmt(factor));
        res.metrics["ratio"] = ratio;
    }
    res.metrics["pr_500"] = p500;
    res.metrics["pr_2000"] = p2000;
    res.metrics["pr_8000"] = p8000;
    res.metrics["log_ratio"] = log_ratio;
    res.passed = check.ok();
    res.details = check.ok() ? "Pr(K~2>0): " + fmt(p500) + " > " + fmt(p2000) + " > " +
                                   fmt(p8000) + "; ratio " + fmt(p500 / p8000) + " ~ " +
                                   fmt(log_ratio)
                             : check.details();
    return res;
}

// ---- criterion 4: q oracle agreement ----

CriterionResult criterion4(Shared& shared) {
    CriterionResult res{4, "q_oracle_agreement", false, "", {}};
    const double factor = shared.tolerance("c4", 5.0);
    const std::int64_t samples = shared.opt.quick ? 1'000'000 : 10'000'000;

    Check check;

    // small-s closed form vs quadrature
    int case_idx = 0;
    for (double ratio : {0.01, 0.05}) {
        const double r = 0.02, s = ratio * r;
        const QValue q = q_quadrature(r, s);
        const double closed = 8.0 / kPi * s * r;
        const double rel = std::fabs(q.value / closed - 1.0);
        check.require(q.converged, "quadrature did not converge at s/r=" + fmt(ratio));
        check.require(rel <= factor * ratio, "s/r=" + fmt(ratio) + ": |q/(8sr/pi)-1| = " +
                                                 fmt(rel) + " > " + fmt(factor * ratio));
        res.metrics["rel_dev_sr_" + fmt(ratio)] = rel;
        ++case_idx;
    }

    // omega(r) limit against the definition-level estimator
    {
        const double r = 0.01, s = 0.5;
        const QValue mc = q_montecarlo(r, s, samples, stream_of(shared.opt.seed, kTagQOracle, 0),
                                       McSampling::torus);
        const double gap = std::fabs(mc.value - kPi * r * r);
        check.require(gap <= 3.0 * mc.std_error,
                      "s/r=50: |MC q - pi r^2| = " + fmt(gap) + " > 3 SE = " +
                          fmt(3.0 * mc.std_error));
        res.metrics["large_s_gap"] = gap;
        res.metrics["large_s_se"] = mc.std_error;
    }

    // quadrature vs MC cross-check in the middle regimes
    int idx = 1;
    for (double ratio : {0.5, 1.0, 2.0}) {
        const double r = 0.05, s = ratio * r;
        const QValue quad = q_quadrature(r, s);
        const QValue mc = q_montecarlo(r, s, samples,
                                       stream_of(shared.opt.seed, kTagQOracle,
                                                 static_cast<std::uint64_t>(idx)),
                                       McSampling::torus);
        const double gap = std::fabs(quad.value - mc.value);
        check.require(quad.converged, "quadrature did not converge at s/r=" + fmt(ratio));
        check.require(gap <= 3.0 * mc.std_error,
                      "s/r=" + fmt(ratio) + ": |quad - MC| = " + fmt(gap) + " > 3 SE = " +
                          fmt(3.0 * mc.std_error));
        res.metrics["crosscheck_gap_sr_" + fmt(ratio)] = gap;
        res.metrics["crosscheck_se_sr_" + fmt(ratio)] = mc.std_error;
        ++idx;
    }

    res.passed = check.ok();
    res.details = check.ok() ? "quadrature matches (8/pi)sr within " + fmt(factor) +
                                   "*(s/r); MC within 3 SE of pi r^2 at s/r=50; quadrature vs MC "
                                   "within 3 SE at s/r in {0.5, 1, 2}"
                             : check.details();
    return res;
}

// ---- criterion 5: B/D/S means ----

CriterionResult criterion5(Shared& shared) {
    CriterionResult res{5, "bds_means", false, "", {}};
    const double rel_tol = shared.tolerance("c5", 0.15);
    shared.prefetch_traces({kTagTraceQn1M10, kTagTraceQn4, kTagTraceM1, kTagTraceM100});
    const DynamicReport& trace = shared.trace(kTagTraceQn1M10);
    const DynamicSummary& s = trace.summary;

    const ExpectedBds theory = expected_bds_from(1.0, 1.0); // mu = 1, qn = 1

    Check check;
    check.require(std::fabs(s.mean_b / theory.eb - 1.0) <= rel_tol,
                  "mean B " + fmt(s.mean_b) + " not within " + fmt(rel_tol) + " of " +
                      fmt(theory.eb));
    check.require(std::fabs(s.mean_d / theory.ed - 1.0) <= rel_tol,
                  "mean D " + fmt(s.mean_d) + " not within " + fmt(rel_tol) + " of " +
                      fmt(theory.ed));
    check.require(std::fabs(s.mean_s / theory.es - 1.0) <= rel_tol,
                  "mean S " + fmt(s.mean_s) + " not within " + fmt(rel_tol) + " of " +
                      fmt(theory.es));
    check.require(std::fabs(s.mean_b - s.mean_d) <= 3.0 * (s.se_b + s.se_d),
                  "|mean B - mean D| = " + fmt(std::fabs(s.mean_b - s.mean_d)) +
                      " > 3 combined SE");
    check.require(s.identity_violations == 0,
                  std::to_string(s.identity_violations) + " K1-identity violations");

    res.metrics["mean_b"] = s.mean_b;
    res.metrics["mean_d"] = s.mean_d;
    res.metrics["mean_s"] = s.mean_s;
    res.metrics["theory_eb"] = theory.eb;
    res.metrics["theory_es"] = theory.es;
    res.metrics["identity_violations"] = static_cast<double>(s.identity_violations);
    res.passed = check.ok();
    res.details = check.ok() ? "B=" + fmt(s.mean_b) + " D=" + fmt(s.mean_d) + " S=" +
                                   fmt(s.mean_s) + " vs E B=" + fmt(theory.eb) +
                                   ", E S=" + fmt(theory.es) + "; identities exact"
                             : check.details();
    return res;
}

// ---- criterion 6: joint transition probabilities ----

CriterionResult criterion6(Shared& shared) {
    CriterionResult res{6, "joint_transition_probabilities", false, "", {}};
    const double abs_tol = shared.tolerance("c6", 0.05);
    const DynamicReport& trace = shared.trace(kTagTraceQn1M10);
    const DynamicSummary& s = trace.summary;
    const double steps = static_cast<double>(s.step_pairs);

    const TransitionProbs theory = transition_probs_from(1.0, 1.0 - std::exp(-1.0));
    const double f_cc = s.count_cc / steps, f_cd = s.count_cd / steps;
    const double f_dc = s.count_dc / steps, f_dd = s.count_dd / steps;

    Check check;
    auto within = [&](double f, double p, const char* name) {
        check.require(std::fabs(f - p) <= abs_tol, std::string(name) + " freq " + fmt(f) +
                                                       " not within " + fmt(abs_tol) + " of " +
                                                       fmt(p));
    };
    within(f_cd, theory.p_cd, "C&D'");
    within(f_dc, theory.p_dc, "D&C'");
    within(f_cc, theory.p_cc, "C&C'");
    within(f_dd, theory.p_dd, "D&D'");
    const double se = std::sqrt(f_cd * (1.0 - f_cd) / steps + f_dc * (1.0 - f_dc) / steps);
    check.require(std::fabs(f_cd - f_dc) <= 3.0 * se || s.count_cd == s.count_dc,
                  "|freq(CD') - freq(DC')| exceeds 3 SE");

    res.metrics["f_cc"] = f_cc;
    res.metrics["f_cd"] = f_cd;
    res.metrics["f_dc"] = f_dc;
    res.metrics["f_dd"] = f_dd;
    res.metrics["p_cc"] = theory.p_cc;
    res.metrics["p_cd"] = theory.p_cd;
    res.metrics["p_dd"] = theory.p_dd;
    res.passed = check.ok();
    res.details = check.ok() ? "freqs (cc,cd,dc,dd)=(" + fmt(f_cc) + "," + fmt(f_cd) + "," +
                                   fmt(f_dc) + "," + fmt(f_dd) + ") vs (" + fmt(theory.p_cc) +
                                   "," + fmt(theory.p_cd) + "," + fmt(theory.p_dc) + "," +
                                   fmt(theory.p_dd) + ")"
                             : check.details();
    return res;
}

// ---- criterion 7: expected period lengths ----

CriterionResult criterion7(Shared& shared) {
    CriterionResult res{7, "expected_period_lengths", false, "", {}};
    const double rel_tol = shared.tolerance("c7", 0.15);

    Check check;
    struct Case {
        StreamTag tag;
        double qn;
    };
    for (const Case c : {Case{kTagTraceQn1M10, 1.0}, Case{kTagTraceQn4, 4.0}}) {
        const DynamicReport& trace = shared.trace(c.tag);
        const PeriodLengths theory = expected_period_lengths_from(1.0, 1.0 - std::exp(-c.qn),
                                                                  kPi / 8.0 * c.qn);
        const auto& mc = trace.summary.period_c;
        const auto& md = trace.summary.period_d;
        check.require(mc.has_value() && md.has_value(),
                      "qn=" + fmt(c.qn) + ": not enough complete periods");
        if (mc && md) {
            check.require(std::fabs(mc->mean / theory.el_c - 1.0) <= rel_tol,
                          "qn=" + fmt(c.qn) + ": connected mean " + fmt(mc->mean) +
                              " not within " + fmt(rel_tol) + " of " + fmt(theory.el_c));
            check.require(std::fabs(md->mean / theory.el_d - 1.0) <= rel_tol,
                          "qn=" + fmt(c.qn) + ": disconnected mean " + fmt(md->mean) +
                              " not within " + fmt(rel_tol) + " of " + fmt(theory.el_d));
            res.metrics["mean_c_qn" + fmt(c.qn)] = mc->mean;
            res.metrics["mean_d_qn" + fmt(c.qn)] = md->mean;
            res.metrics["theory_c_qn" + fmt(c.qn)] = theory.el_c;
            res.metrics["theory_d_qn" + fmt(c.qn)] = theory.el_d;
        }
    }
    res.passed = check.ok();
    res.details =
        check.ok() ? "complete-period means within " + fmt(rel_tol) +
                         " of closed forms at qn=1 (2.134, 3.667) and qn=4 (1.599, 2.748)"
                   : check.details();
    return res;
}

// ---- criterion 8: renewal identity ----

CriterionResult criterion8(Shared& shared) {
    CriterionResult res{8, "renewal_identity", false, "", {}};
    const DynamicReport& trace = shared.trace(kTagTraceQn1M10);
    const DynamicSummary& s = trace.summary;

    Check check;
    check.require(s.dc_transitions > 0, "no D->C transitions observed");
    if (s.dc_transitions > 0 && s.period_c) {
        const double ratio =
            static_cast<double>(s.steps_connected) / static_cast<double>(s.dc_transitions);
        const double mean = s.period_c->mean;
        // steps_connected = sum(complete) + sum(censored C); each complete C run
        // starts with a D->C flip, plus at most one censored trailing run
        const double bound = (static_cast<double>(s.censored_c_steps) + mean) /
                                 static_cast<double>(s.dc_transitions) +
                             1e-9;
        check.require(std::fabs(ratio - mean) <= bound,
                      "renewal ratio " + fmt(ratio) + " differs from complete mean " + fmt(mean) +
                          " by more than " + fmt(bound));
        res.metrics["renewal_ratio"] = ratio;
        res.metrics["complete_mean"] = mean;
        res.metrics["bound"] = bound;
    }
    res.passed = check.ok();
    res.details = check.ok()
                      ? "steps-connected / D->C transitions = " +
                            fmt(res.metrics["renewal_ratio"]) + " vs complete mean " +
                            fmt(res.metrics["complete_mean"]) + " (within one boundary period)"
                      : check.details();
    return res;
}

// ---- criterion 9: insensitivity to m ----

// mean and batch-means standard error of the complete periods of one kind;
// consecutive periods are correlated within a heading-hold epoch, so the
// i.i.d. SE would be too small
struct PeriodMean {
    double mean{0.0};
    double se{0.0};
    std::int64_t count{0};
};

PeriodMean period_mean_batched(const std::vector<PeriodRecord>& periods, Connectivity kind) {
    std::vector<double> lengths;
    for (const PeriodRecord& p : periods) {
        if (p.complete && p.kind == kind) lengths.push_back(static_cast<double>(p.length));
    }
    PeriodMean out;
    out.count = static_cast<std::int64_t>(lengths.size());
    if (lengths.empty()) return out;
    double total = 0.0;
    for (double v : lengths) total += v;
    out.mean = total / static_cast<double>(lengths.size());

    const std::size_t batches =
        std::min<std::size_t>(64, std::max<std::size_t>(2, lengths.size() / 30));
    const std::size_t per = lengths.size() / batches;
    if (per < 2) { // too few periods for batching; fall back to iid
        double ss = 0.0;
        for (double v : lengths) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (lengths.size() - 1.0) / lengths.size());
        return out;
    }
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t i = 0; i < per; ++i) means[b] += lengths[b * per + i];
        means[b] /= static_cast<double>(per);
    }
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= static_cast<double>(batches);
    double ss = 0.0;
    for (double v : means) ss += (v - grand) * (v - grand);
    out.se = std::sqrt(ss / (batches - 1.0) / static_cast<double>(batches));
    return out;
}

CriterionResult criterion9(Shared& shared) {
    CriterionResult res{9, "insensitivity_to_m", false, "", {}};
    const double se_mult = shared.tolerance("c9", 3.0);
    shared.prefetch_traces({kTagTraceQn1M10, kTagTraceM1, kTagTraceM100});

    struct Entry {
        int m;
        PeriodMean c, d;
    };
    std::vector<Entry> entries;
    for (const auto& [tag, m] : std::vector<std::pair<StreamTag, int>>{
             {kTagTraceM1, 1}, {kTagTraceQn1M10, 10}, {kTagTraceM100, 100}}) {
        const DynamicReport& trace = shared.trace(tag);
        Entry e{m, period_mean_batched(trace.periods, Connectivity::connected),
                period_mean_batched(trace.periods, Connectivity::disconnected)};
        if (e.c.count < 50 || e.d.count < 50) {
            res.details = "m=" + std::to_string(m) + ": not enough complete periods";
            return res;
        }
        res.metrics["mean_c_m" + std::to_string(m)] = e.c.mean;
        res.metrics["mean_d_m" + std::to_string(m)] = e.d.mean;
        entries.push_back(e);
    }

    Check check;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            auto agree = [&](const PeriodMean& a, const PeriodMean& b, const char* kind) {
                const double se = std::hypot(a.se, b.se);
                check.require(std::fabs(a.mean - b.mean) <= se_mult * se,
                              std::string(kind) + " means at m=" +
                                  std::to_string(entries[i].m) + " and m=" +
                                  std::to_string(entries[j].m) + " differ by " +
                                  fmt(std::fabs(a.mean - b.mean)) + " > " + fmt(se_mult * se));
            };
            agree(entries[i].c, entries[j].c, "connected");
            agree(entries[i].d, entries[j].d, "disconnected");
        }
    }
    res.passed = check.ok();
    res.details = check.ok() ? "period means agree across m in {1, 10, 100} within " +
                                   fmt(se_mult) + " combined batch-means SE"
                             : check.details();
    return res;
}

// ---- criterion 10: oracle equivalences ----

// BFS partition from the raw distance matrix; canonical label = min member.
std::vector<std::int32_t> bfs_partition(const std::vector<Point>& points, double r) {
    const std::int32_t n = static_cast<std::int32_t>(points.size());
    const double r2 = r * r;
    std::vector<std::int32_t> label(n, -1);
    std::vector<std::int32_t> queue;
    for (std::int32_t i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = i;
        queue.assign(1, i);
        while (!queue.empty()) {
            const std::int32_t u = queue.back();
            queue.pop_back();
            for (std::int32_t v = 0; v < n; ++v) {
                if (label[v] < 0 && torus_distance_sq(points[u], points[v]) <= r2) {
                    label[v] = i;
                    queue.push_back(v);
                }
            }
        }
    }
    return label;
}

// Census recomputed from the BFS partition and pairwise distances only.
CensusReport brute_census(const std::vector<Point>& points, double r, double epsilon,
                          int ell_max) {
    CensusReport rep;
    rep.epsilon = epsilon;
    for (int l = 1; l <= ell_max; ++l) {
        rep.k_ell[l] = 0;
        rep.k_prime[l] = 0;
        rep.k_tilde[l] = 0;
    }
    const std::vector<std::int32_t> label = bfs_partition(points, r);
    std::map<std::int32_t, std::vector<std::int32_t>> comps;
    for (std::size_t i = 0; i < points.size(); ++i) {
        comps[label[static_cast<std::int32_t>(i)]].push_back(static_cast<std::int32_t>(i));
    }

    std::int32_t largest_key = -1;
    for (const auto& [key, mem] : comps) {
        if (static_cast<std::int32_t>(mem.size()) > rep.largest_size) {
            rep.largest_size = static_cast<std::int32_t>(mem.size());
            largest_key = key;
        }
    }

    const double close_r = epsilon * r;
    for (const auto& [key, mem] : comps) {
        const int sz = static_cast<int>(mem.size());
        ++rep.k_ell[sz];
        if (sz == 1) ++rep.k1;

        // K': some member must see all others within eps*r; unwrap around it
        if (sz <= ell_max) {
            std::int32_t anchor = -1;
            for (std::int32_t v : mem) {
                bool all = true;
                for (std::int32_t u : mem) {
                    if (torus_distance(points[u], points[v]) > close_r) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    anchor = v;
                    break;
                }
            }
            if (anchor >= 0) {
                std::int32_t leftmost = -1;
                double lx = 0.0, ly = 0.0;
                for (std::int32_t u : mem) {
                    const double ux = points[anchor].x + min_image_offset(points[u].x - points[anchor].x);
                    const double uy = points[anchor].y + min_image_offset(points[u].y - points[anchor].y);
                    if (leftmost < 0 || ux < lx || (ux == lx && (uy < ly || (uy == ly && u < leftmost)))) {
                        leftmost = u;
                        lx = ux;
                        ly = uy;
                    }
                }
                bool all = true;
                for (std::int32_t u : mem) {
                    if (torus_distance(points[u], points[leftmost]) > close_r) {
                        all = false;
                        break;
                    }
                }
                if (all) ++rep.k_prime[sz];
            }
        }

        // embeddable iff on both axes the projections leave a gap >= 2r
        auto axis_fits = [&](bool use_x) {
            std::vector<double> vals;
            vals.reserve(mem.size());
            for (std::int32_t u : mem) vals.push_back(use_x ? points[u].x : points[u].y);
            std::sort(vals.begin(), vals.end());
            double largest_gap = vals.front() + 1.0 - vals.back();
            for (std::size_t i = 1; i < vals.size(); ++i) {
                largest_gap = std::max(largest_gap, vals[i] - vals[i - 1]);
            }
            return largest_gap >= 2.0 * r;
        };
        if (!(axis_fits(true) && axis_fits(false))) ++rep.non_embeddable_count;

        if (key != largest_key) {
            for (int l = 1; l <= std::min(sz, ell_max); ++l) ++rep.k_tilde[l];
        }
    }
    return rep;
}

CriterionResult criterion10(Shared& shared) {
    CriterionResult res{10, "oracle_equivalences", false, "", {}};
    const double bb_rel = shared.tolerance("c10", 0.02);
    const std::int64_t scale = shared.opt.quick ? 10 : 1;
    const int adjacency_instances = static_cast<int>(1000 / scale);
    const int census_instances = static_cast<int>(300 / scale);

    Check check;
    int adjacency_bad = 0, partition_bad = 0, census_bad = 0;

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : adjacency_bad, partition_bad, census_bad)
    for (int inst = 0; inst < adjacency_instances; ++inst) {
        SplitMix64 rng(stream_of(shared.opt.seed, kTagInstances, static_cast<std::uint64_t>(inst)));
        const std::int32_t n = 2 + static_cast<std::int32_t>(rng.next_u64() % 299);
        const double r = 0.003 + 0.447 * rng.next_double();
        std::vector<Point> points(static_cast<std::size_t>(n));
        for (Point& p : points) {
            p.x = rng.next_double();
            p.y = rng.next_double();
        }

        const Graph fast = build_rgg(points, r);
        const Graph slow = build_rgg_bruteforce(points, r);
        if (fast.adjacency != slow.adjacency) ++adjacency_bad;

        const ComponentLabeling lab = connected_components(fast);
        const std::vector<std::int32_t> bfs = bfs_partition(points, r);
        // canonicalize union-find labels by minimal member
        std::map<std::int32_t, std::int32_t> min_member;
        for (std::int32_t v = 0; v < n; ++v) {
            auto [it, fresh] = min_member.try_emplace(lab.root[v], v);
            if (!fresh) it->second = std::min(it->second, v);
        }
        bool same = true;
        for (std::int32_t v = 0; v < n; ++v) {
            if (min_member.at(lab.root[v]) != bfs[v]) {
                same = false;
                break;
            }
        }
        if (!same) ++partition_bad;

        if (inst < census_instances) {
            const double eps = 0.05 + 0.4 * rng.next_double();
            const int ell_max = 2 + static_cast<int>(rng.next_u64() % 5);
            const CensusReport mine = component_census(points, fast, lab, eps, ell_max);
            const CensusReport ref = brute_census(points, r, eps, ell_max);
            if (mine.k1 != ref.k1 || mine.k_ell != ref.k_ell || mine.k_prime != ref.k_prime ||
                mine.k_tilde != ref.k_tilde || mine.largest_size != ref.largest_size ||
                mine.non_embeddable_count != ref.non_embeddable_count) {
                ++census_bad;
            }
        }
    }
    check.require(adjacency_bad == 0,
                  std::to_string(adjacency_bad) + " adjacency mismatches vs brute force");
    check.require(partition_bad == 0,
                  std::to_string(partition_bad) + " union-find vs BFS partition mismatches");
    check.require(census_bad == 0,
                  std::to_string(census_bad) + " census mismatches vs brute-force census");

    // balls-and-bins closed form vs inclusion-exclusion over the stated box
    double worst = 0.0;
    const std::int64_t n_balls = 100000;
    for (double np0 : {0.5, 2.0, 10.0}) {
        const double p0 = np0 / n_balls;
        std::vector<double> npw = {0.1, 1.0, 10.0};
        for (int k = 1; k <= 3; ++k) {
            std::vector<int> pick(static_cast<std::size_t>(k), 0);
            while (true) {
                std::vector<double> ps;
                for (int b : pick) ps.push_back(npw[static_cast<std::size_t>(b)] / n_balls);
                const double exact = balls_bins_exact(n_balls, p0, ps);
                const double asym = balls_bins_asymptotic(n_balls, p0, ps);
                worst = std::max(worst, std::fabs(asym / exact - 1.0));
                int d = k - 1;
                while (d >= 0 && ++pick[static_cast<std::size_t>(d)] == 3) pick[static_cast<std::size_t>(d--)] = 0;
                if (d < 0) break;
            }
        }
    }
    check.require(worst <= bb_rel, "balls-and-bins worst relative error " + fmt(worst) + " > " +
                                       fmt(bb_rel));
    res.metrics["adjacency_instances"] = adjacency_instances;
    res.metrics["census_instances"] = census_instances;
    res.metrics["balls_bins_worst_rel"] = worst;

    res.passed = check.ok();
    res.details = check.ok()
                      ? "grid==brute on " + std::to_string(adjacency_instances) +
                            " instances; union-find==BFS; census==brute on " +
                            std::to_string(census_instances) +
                            "; balls-and-bins worst rel err " + fmt(worst)
                      : check.details();
    return res;
}

// ---- criterion 11: stationarity ----

CriterionResult criterion11(Shared& shared) {
    CriterionResult res{11, "stationarity", false, "", {}};
    const double p_min = shared.tolerance("c11", 0.01);
    const int seeds = 100;
    const std::int64_t n_agents = 1000;
    const std::int64_t horizon = shared.opt.quick ? 100 : 1000;

    std::vector<Point> final_positions(static_cast<std::size_t>(seeds) * n_agents);
#pragma omp parallel for schedule(dynamic, 1)
    for (int sd = 0; sd < seeds; ++sd) {
        WorldConfig cfg;
        cfg.n = n_agents;
        cfg.r = 0.05; // unused by the walk itself
        cfg.s = 0.037;
        cfg.m = 7;
        cfg.seed = stream_of(shared.opt.seed, kTagStationarity, static_cast<std::uint64_t>(sd));
        WorldState world = init_world(cfg);
        for (std::int64_t t = 0; t < horizon; ++t) step_in_place(world);
        for (std::int64_t i = 0; i < n_agents; ++i) {
            final_positions[static_cast<std::size_t>(sd) * n_agents + i] =
                world.agents[static_cast<std::size_t>(i)].position;
        }
    }

    std::vector<double> xs, ys;
    xs.reserve(final_positions.size());
    ys.reserve(final_positions.size());
    for (const Point& p : final_positions) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const GofResult ks_x = ks_uniform(xs);
    const GofResult ks_y = ks_uniform(ys);
    const GofResult grid = chi_square_uniform_grid(final_positions, 10);

    Check check;
    check.require(ks_x.p_value > p_min, "KS x p " + fmt(ks_x.p_value) + " <= " + fmt(p_min));
    check.require(ks_y.p_value > p_min, "KS y p " + fmt(ks_y.p_value) + " <= " + fmt(p_min));
    check.require(grid.p_value > p_min,
                  "10x10 chi-square p " + fmt(grid.p_value) + " <= " + fmt(p_min));
    res.metrics["ks_x_p"] = ks_x.p_value;
    res.metrics["ks_y_p"] = ks_y.p_value;
    res.metrics["grid_p"] = grid.p_value;
    res.passed = check.ok();
    res.details = check.ok() ? "KS p (x,y) = (" + fmt(ks_x.p_value) + ", " + fmt(ks_y.p_value) +
                                   "), 10x10 chi-square p = " + fmt(grid.p_value)
                             : check.details();
    return res;
}

} // namespace

ValidationReport run_validation(const ValidationOptions& options) {
    Shared shared(options);
    ValidationReport report;

    auto wanted = [&](int id) {
        return options.only.empty() ||
               std::find(options.only.begin(), options.only.end(), id) != options.only.end();
    };

    using Criterion = CriterionResult (*)(Shared&);
    const Criterion criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                  criterion5, criterion6, criterion7, criterion8,
                                  criterion9, criterion10, criterion11};
    report.all_passed = true;
    for (int id = 1; id <= 11; ++id) {
        if (!wanted(id)) continue;
        CriterionResult res = criteria[id - 1](shared);
        if (options.quick) res.details += " [quick scale]";
        report.all_passed = report.all_passed && res.passed;
        report.criteria.push_back(std::move(res));
    }
    return report;
}

std::string to_json_text(const ValidationReport& report, const ValidationOptions& options) {
    nlohmann::json j;
    j["all_passed"] = report.all_passed;
    j["seed"] = options.seed;
    j["quick"] = options.quick;
    nlohmann::json arr = nlohmann::json::array();
    for (const CriterionResult& c : report.criteria) {
        nlohmann::json e;
        e["id"] = c.id;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["details"] = c.details;
        e["metrics"] = c.metrics;
        arr.push_back(e);
    }
    j["criteria"] = arr;
    return j.dump(2) + "\n";
}

} // namespace dynrgg
