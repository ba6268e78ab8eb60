#pragma once

// Quadrature engines for weakly singular kernels, the gamma function, and
// finite-difference helpers.
//
// Two fixed-resolution rules share the graded mesh s_j = L*(j/N)^r:
//   * midpoint: kernel evaluated at cell midpoints, singular endpoint never
//     touched; works for any integrand shape.
//   * product: for kernels s^(mu-1)*g(s) with constant mu, g is interpolated
//     linearly per cell and integrated against exact power moments; accuracy
//     is O(N^-2) uniformly in mu.
// Adaptive refinement doubles N globally until successive estimates agree in
// relative terms; failure to converge is a warning carried in the result.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fracvar/errors.hpp"

namespace fracvar::numerics {

/// Gamma function on the positive axis (relative error well below 1e-12 on
/// the arguments used by the kernels, which live in (0,2)).
inline double gamma(double z) {
    if (!(z > 0.0))
        throw DomainError("gamma: argument must be positive, got " + std::to_string(z));
    double r = std::tgamma(z);
    if (!std::isfinite(r))
        throw DomainError("gamma: overflow at z = " + std::to_string(z));
    return r;
}

struct QuadratureConfig {
    int cells = 64;        // base mesh size N
    double grading = 2.0;  // mesh grading exponent r
    double rel_tol = 1e-6; // target relative error for adaptive doubling
    int max_doublings = 10;

    void validate() const {
        if (cells < 4) throw InputError("QuadratureConfig: cells must be >= 4");
        if (!(grading >= 1.0)) throw InputError("QuadratureConfig: grading must be >= 1");
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw InputError("QuadratureConfig: rel_tol must be in (0,1)");
        if (max_doublings < 0 || max_doublings > 16)
            throw InputError("QuadratureConfig: max_doublings must be in [0,16]");
    }
};

struct FiniteDiffConfig {
    double step_scale = 1e-5; // relative step, h = step_scale * max(1,|t|)

    void validate() const {
        if (!(step_scale >= 1e-8 && step_scale <= 1e-2))
            throw InputError("FiniteDiffConfig: step_scale must be in [1e-8, 1e-2]");
    }

    double step_at(double t) const { return step_scale * std::max(1.0, std::fabs(t)); }
};

struct QuadResult {
    double value = 0.0;
    bool converged = true;
    double last_delta = 0.0; // relative change at the final doubling
    int cells_used = 0;
};

/// Graded nodes 0 = s_0 < ... < s_N = length, optionally merged with fixed
/// breakpoints (trajectory knots) so no cell straddles a derivative jump.
inline std::vector<double> graded_mesh(double length, int n, double r,
                                       std::span<const double> breaks = {}) {
    std::vector<double> mesh;
    mesh.reserve(static_cast<std::size_t>(n) + breaks.size() + 1);
    for (int j = 0; j <= n; ++j)
        mesh.push_back(length * std::pow(static_cast<double>(j) / n, r));
    mesh.back() = length;
    for (double b : breaks)
        if (b > 0.0 && b < length) mesh.push_back(b);
    std::sort(mesh.begin(), mesh.end());
    double eps = 1e-14 * length;
    mesh.erase(std::unique(mesh.begin(), mesh.end(),
                           [eps](double a, double b) { return b - a <= eps; }),
               mesh.end());
    mesh.back() = length;
    return mesh;
}

template <class F>
double midpoint_graded_fixed(F&& f, double length, int n, double r,
                             std::span<const double> breaks = {}) {
    auto mesh = graded_mesh(length, n, r, breaks);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < mesh.size(); ++j) {
        double w = mesh[j + 1] - mesh[j];
        double s = 0.5 * (mesh[j] + mesh[j + 1]);
        double v = f(s);
        if (!std::isfinite(v))
            throw NumericError("non-finite integrand value at s = " + std::to_string(s));
        total += v * w;
    }
    return total;
}

/// integral_0^length s^(mu-1) g(s) ds with g linearly interpolated per cell
/// and the power moments integrated exactly.
template <class G>
double product_graded_fixed(G&& g, double length, double mu, int n, double r,
                            std::span<const double> breaks = {}) {
    auto mesh = graded_mesh(length, n, r, breaks);
    double total = 0.0;
    double gp = g(mesh[0]);
    if (!std::isfinite(gp))
        throw NumericError("non-finite integrand factor at s = " + std::to_string(mesh[0]));
    for (std::size_t j = 0; j + 1 < mesh.size(); ++j) {
        double p = mesh[j], q = mesh[j + 1];
        double gq = g(q);
        if (!std::isfinite(gq))
            throw NumericError("non-finite integrand factor at s = " + std::to_string(q));
        double m0 = (std::pow(q, mu) - std::pow(p, mu)) / mu;
        double m1 = (std::pow(q, mu + 1.0) - std::pow(p, mu + 1.0)) / (mu + 1.0);
        total += gp * m0 + (gq - gp) / (q - p) * (m1 - p * m0);
        gp = gq;
    }
    return total;
}

namespace detail {

template <class Estimate>
QuadResult double_until_converged(Estimate&& est, const QuadratureConfig& cfg) {
    int n = cfg.cells;
    double prev = est(n);
    QuadResult res{prev, false, 0.0, n};
    for (int k = 0; k < cfg.max_doublings; ++k) {
        n *= 2;
        double cur = est(n);
        double delta = std::fabs(cur - prev);
        double scale = std::max(std::fabs(cur), std::fabs(prev));
        res.value = cur;
        res.cells_used = n;
        res.last_delta = scale > 0.0 ? delta / scale : 0.0;
        if (delta <= cfg.rel_tol * scale) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    return res;
}

} // namespace detail

/// Adaptive midpoint rule for integrands behaving like s^(mu(s)-1)*g(s) with
/// mu in (0,1) and g smooth away from s = 0.
template <class F>
QuadResult singular_integral(F&& f, double length, const QuadratureConfig& cfg,
                             std::span<const double> breaks = {}) {
    if (!(length > 0.0)) throw InputError("singular_integral: length must be positive");
    return detail::double_until_converged(
        [&](int n) { return midpoint_graded_fixed(f, length, n, cfg.grading, breaks); }, cfg);
}

/// Adaptive product rule for s^(mu-1)*g(s) with constant exponent mu.
template <class G>
QuadResult singular_integral_product(G&& g, double length, double mu,
                                     const QuadratureConfig& cfg,
                                     std::span<const double> breaks = {}) {
    if (!(length > 0.0)) throw InputError("singular_integral_product: length must be positive");
    return detail::double_until_converged(
        [&](int n) { return product_graded_fixed(g, length, mu, n, cfg.grading, breaks); }, cfg);
}

template <class F>
double central_diff(F&& f, double t, const FiniteDiffConfig& cfg) {
    double h = cfg.step_at(t);
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Adaptive composite Simpson for smooth integrands (outer functional
/// integral). Panel count doubles until relative agreement.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double rel_tol, int max_doublings = 10,
                            int base_panels = 16) {
    if (!(b > a)) return QuadResult{0.0, true, 0.0, 0};
    auto est = [&](int n) {
        double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        s *= h / 3.0;
        if (!std::isfinite(s)) throw NumericError("non-finite integrand in outer integral");
        return s;
    };
    QuadratureConfig cfg;
    cfg.cells = base_panels;
    cfg.rel_tol = rel_tol;
    cfg.max_doublings = max_doublings;
    return detail::double_until_converged(est, cfg);
}

} // namespace fracvar::numerics
