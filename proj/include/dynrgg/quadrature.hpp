#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace dynrgg {

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1,1]
inline constexpr std::array<double, 15> gl15_nodes = {
    0.0000000000000000,
    -0.2011940939974345, 0.2011940939974345,
    -0.3941513470775634, 0.3941513470775634,
    -0.5709721726085388, 0.5709721726085388,
    -0.7244177313601701, 0.7244177313601701,
    -0.8482065834104272, 0.8482065834104272,
    -0.9372733924007060, 0.9372733924007060,
    -0.9879925180204854, 0.9879925180204854};
inline constexpr std::array<double, 15> gl15_weights = {
    0.2025782419255613,
    0.1984314853271116, 0.1984314853271116,
    0.1861610000155622, 0.1861610000155622,
    0.1662692058169939, 0.1662692058169939,
    0.1395706779261543, 0.1395706779261543,
    0.1071592204671719, 0.1071592204671719,
    0.0703660474881081, 0.0703660474881081,
    0.0307532419961173, 0.0307532419961173};

template <class F>
double gl15(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (int i = 0; i < 15; ++i) sum += gl15_weights[i] * f(mid + half * gl15_nodes[i]);
    return half * sum;
}

} // namespace detail

struct QuadResult {
    double value{0.0};
    double error_estimate{0.0};
    bool converged{false};
    int panels{0};
};

/// Adaptive Gauss-Legendre over [a,b]: a panel is accepted when its one- and
/// two-subpanel GL15 estimates agree to the panel's share of the tolerance,
/// otherwise it is bisected. `breakpoints` seeds the initial subdivision
/// (for known kinks of the integrand). `abs_tol` is an absolute floor for
/// integrals whose value is small against the caller's natural scale.
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rel_tol,
                              std::span<const double> breakpoints = {},
                              double abs_tol = 0.0, int max_panels = 40000) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    std::vector<double> cuts{a, b};
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());

    struct Panel {
        double lo, hi, coarse;
        int depth;
    };
    std::vector<Panel> stack;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        stack.push_back({cuts[i], cuts[i + 1], detail::gl15(f, cuts[i], cuts[i + 1]), 0});
    }

    // first pass magnitude estimate for the relative-tolerance scale
    double scale = 0.0;
    for (const Panel& p : stack) scale += std::fabs(p.coarse);
    scale = std::max(scale, 1e-300);

    double sum = 0.0, err = 0.0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        ++res.panels;
        if (res.panels > max_panels) {
            res.converged = false;
            res.value = sum + p.coarse;
            for (const Panel& q : stack) res.value += q.coarse;
            res.error_estimate = err + rel_tol * scale; // best effort
            return res;
        }
        const double mid = 0.5 * (p.lo + p.hi);
        const double left = detail::gl15(f, p.lo, mid);
        const double right = detail::gl15(f, mid, p.hi);
        const double fine = left + right;
        const double delta = std::fabs(fine - p.coarse);
        const double budget =
            std::max(rel_tol * scale, abs_tol) * (p.hi - p.lo) / (b - a);
        if (delta <= budget || p.depth >= 48) {
            sum += fine;
            err += delta;
            scale = std::max(scale, std::fabs(sum));
        } else {
            stack.push_back({p.lo, mid, left, p.depth + 1});
            stack.push_back({mid, p.hi, right, p.depth + 1});
        }
    }
    res.value = sum;
    res.error_estimate = err;
    res.converged =
        err <= 4.0 * std::max(rel_tol * std::max(std::fabs(sum), 1e-300), abs_tol);
    return res;
}

} // namespace dynrgg
