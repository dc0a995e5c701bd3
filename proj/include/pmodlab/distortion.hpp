#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmodlab/quadrature.hpp"
#include "pmodlab/radial_map.hpp"

namespace pmodlab {

/// Singular values of the derivative of a radial map at radius r, in the
/// radial/tangential frame where it is diagonal.
struct StretchData {
    double lambda_r;      // |rho'(r)|
    double lambda_tau;    // rho(r) / r
    double jacobian_abs;  // lambda_tau^{n-1} * lambda_r
    double min_stretch;   // min(lambda_r, lambda_tau)
};

inline StretchData stretches(const RadialMap& map, double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("stretches: radius must lie in (0,1)");
    }
    const double drho = map.profile().derivative(r);
    if (!std::isfinite(drho)) {
        throw std::invalid_argument("stretches: profile derivative undefined at this radius");
    }
    StretchData s;
    s.lambda_r = std::abs(drho);
    s.lambda_tau = map.profile().value(r) / r;
    s.jacobian_abs = std::pow(s.lambda_tau, map.space().n() - 1) * s.lambda_r;
    s.min_stretch = std::min(s.lambda_r, s.lambda_tau);
    return s;
}

/// Inner p-distortion coefficient K_{I,p} = |J| / l(f')^p, with the
/// three-case convention: 1 where the derivative vanishes, infinity where
/// J = 0 but the derivative does not.
inline double k_ip(const RadialMap& map, double r) {
    const StretchData s = stretches(map, r);
    if (s.jacobian_abs != 0.0) {
        return s.jacobian_abs / std::pow(s.min_stretch, map.space().p());
    }
    if (s.lambda_r == 0.0 && s.lambda_tau == 0.0) return 1.0;
    return kInf;
}

struct FdCheckResult {
    StretchData analytic;
    StretchData numeric;
    double max_rel_err;
};

/// Independent derivative oracle: lambda_r by central difference of rho,
/// lambda_tau by the direct quotient, then the derived quantities.
inline FdCheckResult fd_check(const RadialMap& map, double r, double h) {
    if (!(h > 0.0 && r - h > 0.0 && r + h < 1.0)) {
        throw std::invalid_argument("fd_check: need 0 < r-h and r+h < 1");
    }
    FdCheckResult out;
    out.analytic = stretches(map, r);

    const RadialProfile& rho = map.profile();
    StretchData num;
    num.lambda_r = std::abs((rho.value(r + h) - rho.value(r - h)) / (2.0 * h));
    num.lambda_tau = rho.value(r) / r;
    num.jacobian_abs = std::pow(num.lambda_tau, map.space().n() - 1) * num.lambda_r;
    num.min_stretch = std::min(num.lambda_r, num.lambda_tau);
    out.numeric = num;

    auto rel = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
    };
    out.max_rel_err = std::max({rel(out.analytic.lambda_r, num.lambda_r),
                                rel(out.analytic.lambda_tau, num.lambda_tau),
                                rel(out.analytic.jacobian_abs, num.jacobian_abs),
                                rel(out.analytic.min_stretch, num.min_stretch)});
    return out;
}

}  // namespace pmodlab
