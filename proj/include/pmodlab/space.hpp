#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pmodlab {

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
/// Evaluated through log-Gamma so large n does not overflow.
inline double unit_ball_volume(int n) {
    if (n < 2) {
        throw std::invalid_argument("unit_ball_volume: dimension must be >= 2, got " +
                                    std::to_string(n));
    }
    return std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
}

/// Surface area of the unit sphere in R^n; equals n times the ball volume.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

struct GeometricConstants {
    double omega_n;       // volume of the unit ball
    double omega_sphere;  // area of the unit sphere, = n * omega_n
};

/// Dimension n >= 2 and exponent p > n. The guard band keeps exponents like
/// 1/(n-p) and (p-n)/(p-1) away from the blow-up at p = n.
class SpaceParams {
public:
    SpaceParams(int n, double p, double guard_band = 1e-6) : n_(n), p_(p) {
        if (n < 2) {
            throw std::invalid_argument("SpaceParams: dimension must be >= 2, got " +
                                        std::to_string(n));
        }
        if (!(p - n >= guard_band)) {
            throw std::invalid_argument("SpaceParams: exponent p must satisfy p - n >= " +
                                        std::to_string(guard_band) + ", got p = " +
                                        std::to_string(p) + " with n = " + std::to_string(n));
        }
        constants_.omega_n = unit_ball_volume(n);
        constants_.omega_sphere = n * constants_.omega_n;
    }

    int n() const { return n_; }
    double p() const { return p_; }
    const GeometricConstants& constants() const { return constants_; }
    double omega_n() const { return constants_.omega_n; }
    double omega_sphere() const { return constants_.omega_sphere; }
    double p_minus_n() const { return p_ - n_; }

private:
    int n_;
    double p_;
    GeometricConstants constants_;
};

}  // namespace pmodlab
