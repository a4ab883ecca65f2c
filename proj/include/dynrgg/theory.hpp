#pragma once

#include <cstdint>
#include <vector>

namespace dynrgg {

/// Expected number of isolated vertices: n * exp(-pi r^2 n).
double mu_of(std::int64_t n, double r);

/// Radius with mu_of(n, r) == mu: sqrt(ln(n/mu) / (pi n)).
/// Throws std::domain_error unless 0 < mu <= n.
double radius_for_mu(std::int64_t n, double mu);

enum class QMethod { closed_form, quadrature, montecarlo };

struct QValue {
    double value{0.0};
    QMethod method{QMethod::closed_form};
    double std_error{0.0}; // 0 for deterministic paths
    bool converged{true};
};

/// q by deterministic 2-D integration (rotational symmetry reduces the
/// 3-D probability to polar coordinates around the stationary endpoint).
/// Valid while the geometry is wrap-free; q_exact guards the domain.
/// Throws std::invalid_argument unless 0 < tol <= 1e-6.
QValue q_quadrature(double r, double s, double tol = 1e-8);

enum class McSampling {
    disk,  // position drawn in the radius-r disk where the event can occur
    torus, // position drawn uniformly on the torus (definition-level)
};

/// q by Monte Carlo, heading-stratified, with per-stratum binomial standard
/// error. `disk` is the precise estimator backing q_exact; `torus` samples
/// the defining probability directly and its larger SE is what the
/// asymptotic-limit acceptance checks are measured against.
QValue q_montecarlo(double r, double s, std::int64_t samples = 10'000'000,
                    std::uint64_t seed = 0x51a7edba5e11ull,
                    McSampling sampling = McSampling::disk);

/// Probability that a specific pair is adjacent at step t and not at t+1
/// (both agents move distance s in independent uniform directions).
/// Dispatch: s == 0 -> exact 0; quadrature while s <= 10 r and r + s < 1/4;
/// disk Monte Carlo otherwise. 0 <= q <= pi r^2 always.
QValue q_exact(double r, double s, double tol = 1e-8);

enum class Regime { small_s, theta_r, large_s };

struct QAsymptotic {
    double value{0.0};
    Regime regime{Regime::theta_r};
};

/// Closed-form edge-break probability by s/r regime: (8/pi) s r when
/// s/r < 0.05, pi r^2 when s/r > 20, otherwise q_exact tagged theta_r.
QAsymptotic q_asymptotic(double r, double s);

struct ExpectedBds {
    double eb{0.0};
    double ed{0.0};
    double es{0.0};
    double qn{0.0};
};

/// E B = E D = mu (1 - e^{-qn}), E S = mu e^{-qn}; E B + E S = mu exactly.
ExpectedBds expected_bds(std::int64_t n, double r, double s);

/// Same closed forms from precomputed (mu, qn); exact identities live here.
ExpectedBds expected_bds_from(double mu, double qn);

/// Step length with q_exact(r, s) * n == target_qn, by bracketed bisection
/// (q is only assumed continuous and nondecreasing-in-the-large; Monte Carlo
/// evaluations use a fixed seed so the bracketed function is deterministic).
/// Throws std::domain_error when the target is not reachable.
double invert_qn(std::int64_t n, double r, double target_qn);

struct TransitionProbs {
    double p_cc{0.0};
    double p_cd{0.0};
    double p_dc{0.0};
    double p_dd{0.0};
};

/// Joint two-step connectivity probabilities:
/// p_cd = p_dc = e^{-mu}(1 - e^{-EB}), p_cc = e^{-mu} e^{-EB},
/// p_dd = 1 - 2 e^{-mu} + e^{-mu} e^{-EB}. Sums to 1 identically.
TransitionProbs transition_probs(std::int64_t n, double r, double s);
TransitionProbs transition_probs_from(double mu, double eb);

struct PeriodLengths {
    bool defined{false}; // false when E B == 0 (frozen dynamics)
    double el_c{0.0};    // 1 / (1 - e^{-EB})
    double el_d{0.0};    // (e^{mu} - 1) / (1 - e^{-EB})
    // regime-table approximations, reported alongside the closed forms
    double el_c_approx{0.0};
    double el_d_approx{0.0};
    double srn{0.0};
};

/// Expected connectivity / disconnectivity period lengths, conditional on a
/// transition into the state.
PeriodLengths expected_period_lengths(std::int64_t n, double r, double s);
PeriodLengths expected_period_lengths_from(double mu, double eb, double srn);

/// Asymptotic balls-and-bins probability that bin 0 (hit w.p. p0) stays
/// empty while each of the k bins ps[i] receives at least one of n balls:
/// (1-p0)^n * prod_i (1 - e^{-n ps[i]}).
double balls_bins_asymptotic(std::int64_t n, double p0, const std::vector<double>& ps);

/// Exact value by inclusion-exclusion over subsets S of the k bins:
/// sum_S (-1)^{|S|} (1 - p0 - sum_{i in S} ps[i])^n.
double balls_bins_exact(std::int64_t n, double p0, const std::vector<double>& ps);

/// All closed-form quantities for one parameter point.
struct TheoryPrediction {
    std::int64_t n{0};
    double r{0.0};
    double s{0.0};
    double mu{0.0};
    double q{0.0};
    double qn{0.0};
    double q_asym{0.0};
    Regime regime{Regime::theta_r};
    QMethod q_method{QMethod::closed_form};
    double q_std_error{0.0};
    bool q_converged{true};
    double expected_b{0.0};
    double expected_s{0.0};
    TransitionProbs joint;
    PeriodLengths periods;
};

TheoryPrediction predict(std::int64_t n, double r, double s);

} // namespace dynrgg
