#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pmodlab/quadrature.hpp"
#include "pmodlab/space.hpp"
#include "pmodlab/weight.hpp"

namespace pmodlab {

/// Concentric spherical condenser (B(0, r_outer), closure of B(0, r_inner)).
struct SphericalCondenser {
    double r_inner;
    double r_outer;

    SphericalCondenser(double inner, double outer) : r_inner(inner), r_outer(outer) {
        if (!(inner > 0.0 && inner < outer)) {
            throw std::invalid_argument("SphericalCondenser: need 0 < r_inner < r_outer");
        }
    }
};

/// Weighted ring integral I(0, r1, r2) = \int_{r1}^{r2} dr / (r^{(n-1)/(p-1)} q(r)^{1/(p-1)}).
/// Vanishing weight gives I = +inf, reported as a distinguished infinity.
inline double weighted_ring_integral(const WeightField& w, const SpaceParams& space, double r1,
                                     double r2) {
    detail::require_space_match(w, space);
    if (!(r1 > 0.0 && r1 < r2)) {
        throw std::invalid_argument("weighted_ring_integral: need 0 < r1 < r2");
    }
    const double inv_pm1 = 1.0 / (space.p() - 1.0);
    if (auto pf = w.power_form()) {
        if (pf->coeff == 0.0) return kInf;
        const double exponent = -(space.n() - 1.0 + pf->exponent) * inv_pm1;
        return std::pow(pf->coeff, -inv_pm1) * power_integral(exponent, r1, r2);
    }
    const double value = integrate(
        [&](double r) {
            const double q = w.at_radius(r);
            if (q == 0.0) return kInf;
            return std::pow(r, -(space.n() - 1.0) * inv_pm1) * std::pow(q, -inv_pm1);
        },
        r1, r2);
    return std::isfinite(value) ? value : kInf;
}

/// Extremal admissible density eta_0(r) = 1 / (I r^{(n-1)/(p-1)} q(r)^{1/(p-1)});
/// integrates to 1 over (r1, r2). Reported as 0 when I = +inf.
inline double eta0(const WeightField& w, const SpaceParams& space, double r1, double r2,
                   double r) {
    if (!(r > r1 && r < r2)) {
        throw std::invalid_argument("eta0: radius must lie inside (r1, r2)");
    }
    const double ring = weighted_ring_integral(w, space, r1, r2);
    if (std::isinf(ring)) return 0.0;
    const double inv_pm1 = 1.0 / (space.p() - 1.0);
    return 1.0 /
           (ring * std::pow(r, (space.n() - 1.0) * inv_pm1) * std::pow(w.at_radius(r), inv_pm1));
}

/// Capacity upper bound omega_{n-1} / I^{p-1} for the image condenser of any
/// ring Q-mapping. Degenerate weights map through: I = inf -> 0, I = 0 -> inf.
inline double lemma1_cap_upper(const WeightField& w, const SpaceParams& space,
                               const SphericalCondenser& cond) {
    const double ring = weighted_ring_integral(w, space, cond.r_inner, cond.r_outer);
    if (std::isinf(ring)) return 0.0;
    if (ring == 0.0) return kInf;
    return space.omega_sphere() / std::pow(ring, space.p() - 1.0);
}

/// Measure-based capacity lower bound for p > n:
/// n Omega_n^{p/n} ((p-n)/(p-1))^{p-1} (mA^e - mC^e)^{1-p}, e = (p-n)/(n(p-1)).
/// Sharp on concentric balls.
inline double mazya_cap_lower(const SpaceParams& space, double measure_a, double measure_c) {
    if (!(measure_c > 0.0 && measure_a > measure_c)) {
        throw std::invalid_argument("mazya_cap_lower: need measure_a > measure_c > 0");
    }
    const double n = space.n();
    const double p = space.p();
    const double e = (p - n) / (n * (p - 1.0));
    const double gap = std::pow(measure_a, e) - std::pow(measure_c, e);
    return n * std::pow(space.omega_n(), p / n) * std::pow((p - n) / (p - 1.0), p - 1.0) *
           std::pow(gap, 1.0 - p);
}

/// p-capacity of the concentric spherical condenser, from the radial
/// Euler-Lagrange minimizer:
/// omega_{n-1} ((p-n)/(p-1))^{p-1} (r_outer^k - r_inner^k)^{1-p}, k = (p-n)/(p-1).
inline double exact_spherical_cap(const SpaceParams& space, const SphericalCondenser& cond) {
    const double p = space.p();
    const double k = (p - space.n()) / (p - 1.0);
    const double gap = std::pow(cond.r_outer, k) - std::pow(cond.r_inner, k);
    return space.omega_sphere() * std::pow((p - space.n()) / (p - 1.0), p - 1.0) *
           std::pow(gap, 1.0 - p);
}

struct VariationalOptions {
    double rel_tol = 1e-12;  // stop when the relative energy decrease falls below this
    int max_iterations = 200;
};

struct VariationalResult {
    double energy = 0.0;
    int grid_points = 0;
    int iterations = 0;
    bool converged = false;
};

/// Direct minimization of the radial p-energy omega_{n-1} \int |u'|^p r^{n-1} dr
/// over piecewise-linear profiles with u(r_inner) = 1, u(r_outer) = 0 on a
/// geometric grid (clustered near r_inner). Per-interval energies are exact,
/// so the result is an upper approximation of the capacity that decreases
/// monotonically on nested grid refinements. Damped Newton descent with
/// backtracking; energy decreases monotonically across iterations.
inline VariationalResult variational_cap(const SpaceParams& space, const SphericalCondenser& cond,
                                         int grid_points, const VariationalOptions& opts = {}) {
    if (grid_points < 16) {
        throw std::invalid_argument("variational_cap: need at least 16 grid points");
    }
    const int m = grid_points;
    const double n = space.n();
    const double p = space.p();

    std::vector<double> r(m + 1);
    const double log_ratio = std::log(cond.r_outer / cond.r_inner);
    for (int i = 0; i <= m; ++i) {
        r[i] = cond.r_inner * std::exp(log_ratio * static_cast<double>(i) / m);
    }
    // Interval drop d_i = u_i - u_{i+1}; energy = sum_i c_i |d_i|^p.
    std::vector<double> c(m);
    for (int i = 0; i < m; ++i) {
        const double h = r[i + 1] - r[i];
        c[i] = space.omega_sphere() * (std::pow(r[i + 1], n) - std::pow(r[i], n)) /
               (n * std::pow(h, p));
    }

    std::vector<double> u(m + 1);
    for (int i = 0; i <= m; ++i) u[i] = 1.0 - static_cast<double>(i) / m;

    auto energy_of = [&](const std::vector<double>& v) {
        double e = 0.0;
        for (int i = 0; i < m; ++i) e += c[i] * std::pow(std::abs(v[i] - v[i + 1]), p);
        return e;
    };

    const int interior = m - 1;
    std::vector<double> grad(interior), diag(interior), off(interior), step(interior);
    std::vector<double> trial(m + 1);

    VariationalResult result;
    result.grid_points = grid_points;
    double energy = energy_of(u);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        auto phi = [&](double d) {
            return std::copysign(std::pow(std::abs(d), p - 1.0), d);
        };
        auto curv = [&](double d) { return std::pow(std::abs(d), p - 2.0); };
        for (int j = 1; j <= interior; ++j) {
            const double d_left = u[j - 1] - u[j];
            const double d_right = u[j] - u[j + 1];
            grad[j - 1] = p * (c[j] * phi(d_right) - c[j - 1] * phi(d_left));
            diag[j - 1] = p * (p - 1.0) * (c[j - 1] * curv(d_left) + c[j] * curv(d_right));
            off[j - 1] = (j < interior) ? -p * (p - 1.0) * c[j] * curv(d_right) : 0.0;
        }
        // Thomas solve of the tridiagonal Newton system H step = -grad.
        std::vector<double> cp(interior), dp(interior);
        bool singular = false;
        for (int j = 0; j < interior; ++j) {
            const double denom = diag[j] - (j > 0 ? off[j - 1] * cp[j - 1] : 0.0);
            if (!(std::abs(denom) > 1e-300)) {
                singular = true;
                break;
            }
            cp[j] = (j < interior - 1) ? off[j] / denom : 0.0;
            dp[j] = (-grad[j] - (j > 0 ? off[j - 1] * dp[j - 1] : 0.0)) / denom;
        }
        if (singular) break;
        step[interior - 1] = dp[interior - 1];
        for (int j = interior - 2; j >= 0; --j) step[j] = dp[j] - cp[j] * step[j + 1];

        double directional = 0.0;
        for (int j = 0; j < interior; ++j) directional += grad[j] * step[j];
        if (!(directional < 0.0)) break;  // stationary (or numerically flat)

        double t = 1.0;
        double trial_energy = energy;
        for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
            trial = u;
            for (int j = 0; j < interior; ++j) trial[j + 1] += t * step[j];
            trial_energy = energy_of(trial);
            if (trial_energy <= energy + 1e-4 * t * directional) break;
        }
        if (!(trial_energy < energy)) break;
        u = trial;
        result.iterations = iter + 1;
        const double decrease = (energy - trial_energy) / std::max(trial_energy, 1e-300);
        energy = trial_energy;
        if (decrease < opts.rel_tol) {
            result.converged = true;
            break;
        }
    }
    // A flat final step also counts as converged: nothing left to descend.
    if (!result.converged && result.iterations < opts.max_iterations) result.converged = true;
    result.energy = energy;
    return result;
}

/// Lemma-1 bound evaluated with the box density eta = 1/eps on (eps, 2 eps):
/// eps^{-p} \int_{A(0, eps, 2 eps)} Q dm. Admissible but not extremal, so it
/// dominates lemma1_cap_upper on the same annulus.
inline double ring_box_bound(const WeightField& w, const SpaceParams& space, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("ring_box_bound: eps must lie in (0, 1/2)");
    }
    const double integral = annulus_integral(w, space, eps, 2.0 * eps);
    if (std::isinf(integral)) return kInf;
    return integral / std::pow(eps, space.p());
}

/// All four condenser bounds side by side. The Mazya lower bound uses the
/// ball measures of the condenser plates.
struct CapacityBounds {
    double lower_mazya = 0.0;
    double upper_lemma1 = 0.0;
    std::optional<double> exact_spherical;
    std::optional<VariationalResult> variational;
};

inline CapacityBounds capacity_bounds(const SpaceParams& space, const SphericalCondenser& cond,
                                      const WeightField& w, int grid_points = 4096) {
    CapacityBounds b;
    const double measure_a = space.omega_n() * std::pow(cond.r_outer, space.n());
    const double measure_c = space.omega_n() * std::pow(cond.r_inner, space.n());
    b.lower_mazya = mazya_cap_lower(space, measure_a, measure_c);
    b.upper_lemma1 = lemma1_cap_upper(w, space, cond);
    b.exact_spherical = exact_spherical_cap(space, cond);
    b.variational = variational_cap(space, cond, grid_points);
    return b;
}

}  // namespace pmodlab
