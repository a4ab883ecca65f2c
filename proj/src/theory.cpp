#include "dynrgg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dynrgg/geometry.hpp"
#include "dynrgg/quadrature.hpp"
#include "dynrgg/rng.hpp"

namespace dynrgg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// regime cutoffs (tool convention; the exact q is what the harness uses)
constexpr double kSmallRatio = 0.05;
constexpr double kLargeRatio = 20.0;

double clamp_unit(double c) { return std::min(1.0, std::max(-1.0, c)); }

// fraction of headings that break the pair, for a partner at distance rho
// from the stationary endpoint of the reference agent
double escape_fraction(double r, double s, double rho) {
    const double c = (r * r - s * s - rho * rho) / (2.0 * s * rho);
    return std::acos(clamp_unit(c)) / kPi;
}

} // namespace

double mu_of(std::int64_t n, double r) {
    if (n < 1) throw std::invalid_argument("mu_of: n must be >= 1");
    if (!(r >= 0.0)) throw std::invalid_argument("mu_of: r must be >= 0");
    const double nd = static_cast<double>(n);
    return nd * std::exp(-kPi * r * r * nd);
}

double radius_for_mu(std::int64_t n, double mu) {
    if (n < 1) throw std::invalid_argument("radius_for_mu: n must be >= 1");
    const double nd = static_cast<double>(n);
    if (!(mu > 0.0 && mu <= nd)) {
        throw std::domain_error("radius_for_mu: mu must satisfy 0 < mu <= n");
    }
    return std::sqrt(std::log(nd / mu) / (kPi * nd));
}

QValue q_quadrature(double r, double s, double tol) {
    if (!(r > 0.0)) throw std::invalid_argument("q_quadrature: r must be positive");
    if (!(s >= 0.0)) throw std::invalid_argument("q_quadrature: s must be >= 0");
    if (!(tol > 0.0 && tol <= 1e-6)) {
        throw std::invalid_argument("q_quadrature: tol must be in (0, 1e-6]");
    }
    if (s == 0.0) return {0.0, QMethod::closed_form, 0.0, true};

    // Polar coordinates around the moved endpoint of the reference agent
    // reduce the probability to one dimension: at distance rho from it, the
    // circle of partner positions meets the static disk in an arc of measure
    // m(rho), and a partner there breaks the edge for an escape_fraction of
    // its headings. Both factors vanish at their respective ends of
    // [|r-s|, r+s], so the integrand is bounded with sqrt-type endpoints.
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        const double w = (rho * rho + s * s - r * r) / (2.0 * s * rho);
        if (w >= 1.0) return 0.0;
        const double arc = 2.0 * std::acos(std::max(-1.0, w));
        return rho * arc * escape_fraction(r, s, rho);
    };

    const double lo = std::fabs(r - s);
    const double hi = r + s;
    const double q_scale = std::min(kPi * r * r, 8.0 / kPi * s * r);
    const QuadResult res =
        integrate_adaptive(integrand, lo, hi, tol / 2.0, {}, tol * q_scale / 4.0);

    QValue q;
    q.value = res.value;
    q.method = QMethod::quadrature;
    q.converged = res.converged;
    return q;
}

QValue q_montecarlo(double r, double s, std::int64_t samples, std::uint64_t seed,
                    McSampling sampling) {
    if (!(r > 0.0)) throw std::invalid_argument("q_montecarlo: r must be positive");
    if (!(s >= 0.0)) throw std::invalid_argument("q_montecarlo: s must be >= 0");
    if (sampling == McSampling::disk && r >= 0.5) {
        throw std::invalid_argument("q_montecarlo: disk sampling requires r < 1/2");
    }
    QValue q;
    q.method = QMethod::montecarlo;
    if (s == 0.0 || samples <= 0) return q;

    constexpr int kStrata = 1024;
    const std::int64_t per_stratum = std::max<std::int64_t>(samples / kStrata, 2);
    const double r2 = r * r;
    const Point moved_ref{wrap(s), 0.0}; // stationary list: i sits at the origin, ends here

    std::vector<std::int64_t> hits(kStrata, 0);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < kStrata; ++k) {
        SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(k)));
        std::int64_t h = 0;
        for (std::int64_t it = 0; it < per_stratum; ++it) {
            Point pj;
            if (sampling == McSampling::disk) {
                const double rho = r * std::sqrt(rng.next_double());
                const double phi = kTwoPi * rng.next_double();
                pj.x = wrap(rho * std::cos(phi));
                pj.y = wrap(rho * std::sin(phi));
            } else {
                pj.x = rng.next_double();
                pj.y = rng.next_double();
                if (torus_distance_sq(pj, Point{0.0, 0.0}) > r2) {
                    rng.next_double(); // keep the draw count per iteration fixed
                    continue;
                }
            }
            const double z = (k + rng.next_double()) / kStrata;
            const double angle = kTwoPi * z;
            const Point moved{wrap(pj.x + s * std::cos(angle)), wrap(pj.y + s * std::sin(angle))};
            if (torus_distance_sq(moved, moved_ref) > r2) ++h;
        }
        hits[k] = h;
    }

    const double m = static_cast<double>(per_stratum);
    double p = 0.0, var = 0.0;
    for (int k = 0; k < kStrata; ++k) {
        const double pk = hits[k] / m;
        p += pk;
        var += pk * (1.0 - pk) / (m - 1.0);
    }
    p /= kStrata;
    var /= static_cast<double>(kStrata) * kStrata;

    const double scale = sampling == McSampling::disk ? kPi * r2 : 1.0;
    q.value = scale * p;
    q.std_error = scale * std::sqrt(var);
    return q;
}

QValue q_exact(double r, double s, double tol) {
    if (!(r > 0.0)) throw std::invalid_argument("q_exact: r must be positive");
    if (!(s >= 0.0)) throw std::invalid_argument("q_exact: s must be >= 0");
    if (s == 0.0) return {0.0, QMethod::closed_form, 0.0, true};
    if (s <= 10.0 * r && r + s < 0.25) return q_quadrature(r, s, tol);
    const McSampling sampling = r < 0.45 ? McSampling::disk : McSampling::torus;
    return q_montecarlo(r, s, 10'000'000, 0x51a7edba5e11ull, sampling);
}

QAsymptotic q_asymptotic(double r, double s) {
    if (!(r > 0.0)) throw std::invalid_argument("q_asymptotic: r must be positive");
    if (!(s >= 0.0)) throw std::invalid_argument("q_asymptotic: s must be >= 0");
    const double ratio = s / r;
    if (ratio < kSmallRatio) return {8.0 / kPi * s * r, Regime::small_s};
    if (ratio > kLargeRatio) return {kPi * r * r, Regime::large_s};
    return {q_exact(r, s).value, Regime::theta_r};
}

ExpectedBds expected_bds_from(double mu, double qn) {
    ExpectedBds e;
    e.qn = qn;
    e.eb = mu * (-std::expm1(-qn));
    e.ed = e.eb;
    e.es = mu * std::exp(-qn);
    return e;
}

ExpectedBds expected_bds(std::int64_t n, double r, double s) {
    const double mu = mu_of(n, r);
    const QValue q = q_exact(r, s);
    return expected_bds_from(mu, q.value * static_cast<double>(n));
}

double invert_qn(std::int64_t n, double r, double target_qn) {
    if (n < 1) throw std::invalid_argument("invert_qn: n must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("invert_qn: r must be positive");
    const double nd = static_cast<double>(n);
    const double qn_cap = kPi * r * r * nd;
    if (!(target_qn > 0.0 && target_qn <= qn_cap)) {
        throw std::domain_error("invert_qn: target_qn must be in (0, pi r^2 n]");
    }

    // fixed-seed Monte Carlo keeps the bracketed function deterministic
    auto qn_at = [&](double s) {
        if (s <= 10.0 * r && r + s < 0.25) return q_quadrature(r, s).value * nd;
        const McSampling sampling = r < 0.45 ? McSampling::disk : McSampling::torus;
        return q_montecarlo(r, s, 1'000'000, 0xb15ec7ull, sampling).value * nd;
    };

    double lo = 0.0;          // qn(0) = 0 < target
    double hi = r / 4.0;
    double f_hi = qn_at(hi);
    while (f_hi < target_qn) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) {
            throw std::domain_error("invert_qn: target_qn not reachable (q plateaus below it)");
        }
        f_hi = qn_at(hi);
    }

    for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (qn_at(mid) >= target_qn) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

TransitionProbs transition_probs_from(double mu, double eb) {
    TransitionProbs t;
    const double em = std::exp(-mu);
    const double ebx = std::exp(-eb);
    t.p_cd = em * (-std::expm1(-eb));
    t.p_dc = t.p_cd;
    t.p_cc = em * ebx;
    t.p_dd = 1.0 - 2.0 * em + em * ebx;
    return t;
}

TransitionProbs transition_probs(std::int64_t n, double r, double s) {
    const double mu = mu_of(n, r);
    const ExpectedBds e = expected_bds(n, r, s);
    return transition_probs_from(mu, e.eb);
}

PeriodLengths expected_period_lengths_from(double mu, double eb, double srn) {
    PeriodLengths p;
    p.srn = srn;
    if (!(eb > 0.0)) return p; // frozen dynamics: periods are infinite
    p.defined = true;
    const double denom = -std::expm1(-eb);
    p.el_c = 1.0 / denom;
    p.el_d = std::expm1(mu) / denom;
    if (srn < kSmallRatio) {
        p.el_c_approx = kPi / (8.0 * srn);
        p.el_d_approx = kPi * std::expm1(mu) / (8.0 * srn);
    } else if (srn > kLargeRatio) {
        p.el_c_approx = 1.0;
        p.el_d_approx = std::expm1(mu);
    } else {
        const double d = -std::expm1(-8.0 * srn / kPi);
        p.el_c_approx = 1.0 / d;
        p.el_d_approx = std::expm1(mu) / d;
    }
    return p;
}

PeriodLengths expected_period_lengths(std::int64_t n, double r, double s) {
    const double mu = mu_of(n, r);
    const ExpectedBds e = expected_bds(n, r, s);
    return expected_period_lengths_from(mu, e.eb, s * r * static_cast<double>(n));
}

namespace {

void validate_bins(std::int64_t n, double p0, const std::vector<double>& ps) {
    if (n < 1) throw std::invalid_argument("balls_bins: n must be >= 1");
    if (ps.size() > 30) throw std::invalid_argument("balls_bins: too many bins");
    double total = p0;
    if (!(p0 >= 0.0 && p0 < 1.0)) throw std::invalid_argument("balls_bins: p0 out of [0,1)");
    for (double p : ps) {
        if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("balls_bins: p_i out of [0,1)");
        total += p;
    }
    if (total > 1.0) throw std::invalid_argument("balls_bins: probabilities exceed 1");
}

} // namespace

double balls_bins_asymptotic(std::int64_t n, double p0, const std::vector<double>& ps) {
    validate_bins(n, p0, ps);
    const double nd = static_cast<double>(n);
    double v = std::exp(nd * std::log1p(-p0));
    for (double p : ps) v *= -std::expm1(-nd * p);
    return v;
}

double balls_bins_exact(std::int64_t n, double p0, const std::vector<double>& ps) {
    validate_bins(n, p0, ps);
    const double nd = static_cast<double>(n);
    const std::size_t k = ps.size();
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        double excluded = p0;
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask >> i & 1) {
                excluded += ps[i];
                ++bits;
            }
        }
        const double base = 1.0 - excluded;
        const double term = base <= 0.0 ? 0.0 : std::exp(nd * std::log(base));
        total += (bits % 2 == 0) ? term : -term;
    }
    return std::max(total, 0.0);
}

TheoryPrediction predict(std::int64_t n, double r, double s) {
    TheoryPrediction t;
    t.n = n;
    t.r = r;
    t.s = s;
    t.mu = mu_of(n, r);
    const QValue q = q_exact(r, s);
    t.q = q.value;
    t.q_method = q.method;
    t.q_std_error = q.std_error;
    t.q_converged = q.converged;
    t.qn = q.value * static_cast<double>(n);

    const double ratio = s / r;
    if (ratio < kSmallRatio) {
        t.q_asym = 8.0 / kPi * s * r;
        t.regime = Regime::small_s;
    } else if (ratio > kLargeRatio) {
        t.q_asym = kPi * r * r;
        t.regime = Regime::large_s;
    } else {
        t.q_asym = t.q;
        t.regime = Regime::theta_r;
    }

    const ExpectedBds e = expected_bds_from(t.mu, t.qn);
    t.expected_b = e.eb;
    t.expected_s = e.es;
    t.joint = transition_probs_from(t.mu, e.eb);
    t.periods = expected_period_lengths_from(t.mu, e.eb, s * r * static_cast<double>(n));
    return t;
}

} // namespace dynrgg
