#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmodlab/sampling.hpp"
#include "pmodlab/space.hpp"

namespace pmodlab {

/// Scalar radius profile rho defining a radial map x -> (x/|x|) rho(|x|).
///
/// Power profiles rho(r) = scale * r^theta keep their (scale, theta) data so
/// downstream code can use exact closed forms; custom profiles carry the
/// function and its analytic derivative (validated elsewhere by the
/// finite-difference oracle).
class RadialProfile {
public:
    enum class Kind { Power, Custom };

    static RadialProfile power(double theta, double scale = 1.0) {
        if (!(theta > 0.0)) {
            throw std::invalid_argument("RadialProfile: power exponent must be positive");
        }
        if (!(scale > 0.0)) {
            throw std::invalid_argument("RadialProfile: power scale must be positive");
        }
        RadialProfile p;
        p.kind_ = Kind::Power;
        p.theta_ = theta;
        p.scale_ = scale;
        return p;
    }

    static RadialProfile identity() { return power(1.0); }

    static RadialProfile custom(std::function<double(double)> rho,
                                std::function<double(double)> drho) {
        if (!rho || !drho) {
            throw std::invalid_argument("RadialProfile: custom profile needs rho and rho'");
        }
        RadialProfile p;
        p.kind_ = Kind::Custom;
        p.rho_ = std::move(rho);
        p.drho_ = std::move(drho);
        return p;
    }

    Kind kind() const { return kind_; }
    bool is_power() const { return kind_ == Kind::Power; }
    double exponent() const { return theta_; }
    double scale() const { return scale_; }

    double value(double r) const {
        if (kind_ == Kind::Power) {
            return r == 0.0 ? 0.0 : scale_ * std::pow(r, theta_);
        }
        return rho_(r);
    }

    double derivative(double r) const {
        if (kind_ == Kind::Power) return scale_ * theta_ * std::pow(r, theta_ - 1.0);
        return drho_(r);
    }

    /// Profile of y -> f(s*y): rho~(t) = rho(s*t). Power profiles stay power
    /// with scale multiplied by s^theta.
    RadialProfile rescaled(double s) const {
        if (!(s > 0.0 && s < 1.0)) {
            throw std::invalid_argument("RadialProfile::rescaled: scale must be in (0,1)");
        }
        if (kind_ == Kind::Power) return power(theta_, scale_ * std::pow(s, theta_));
        auto rho = rho_;
        auto drho = drho_;
        return custom([rho, s](double t) { return rho(s * t); },
                      [drho, s](double t) { return s * drho(s * t); });
    }

private:
    RadialProfile() = default;

    Kind kind_ = Kind::Power;
    double theta_ = 1.0;
    double scale_ = 1.0;
    std::function<double(double)> rho_;
    std::function<double(double)> drho_;
};

/// Radial mapping of the unit ball, f(x) = (x/|x|) rho(|x|), f(0) = 0.
class RadialMap {
public:
    RadialMap(SpaceParams space, RadialProfile profile)
        : space_(std::move(space)), profile_(std::move(profile)) {}

    const SpaceParams& space() const { return space_; }
    const RadialProfile& profile() const { return profile_; }

    std::vector<double> eval(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != space_.n()) {
            throw std::invalid_argument("RadialMap::eval: point dimension mismatch");
        }
        double norm_sq = 0.0;
        for (double c : x) norm_sq += c * c;
        const double norm = std::sqrt(norm_sq);
        if (!(norm < 1.0)) {
            throw std::invalid_argument("RadialMap::eval: point must lie in the open unit ball");
        }
        std::vector<double> image(x.begin(), x.end());
        if (norm == 0.0) return image;  // f(0) = 0
        const double factor = profile_.value(norm) / norm;
        for (double& c : image) c *= factor;
        return image;
    }

    /// L_f(r) = max over the sphere |x| = r of |f(x)|; attained everywhere on
    /// the sphere for radial maps, so this is just rho(r).
    double lf_max(double r) const {
        require_radius(r);
        return profile_.value(r);
    }

    /// Lebesgue measure of f(B(0,r)). Radial homeomorphisms map B(0,r) onto
    /// B(0, rho(r)) exactly.
    double image_ball_measure(double r) const {
        require_radius(r);
        return space_.omega_n() * std::pow(profile_.value(r), space_.n());
    }

    /// Evaluates the map on quasi-random points of B(0,r) and confirms every
    /// image lies in the closed ball of radius lf_max(r).
    bool check_ball_image_inclusion(double r, int samples, std::uint64_t skip = 0) const {
        require_radius(r);
        if (samples < 1) {
            throw std::invalid_argument("check_ball_image_inclusion: samples must be >= 1");
        }
        const double bound = lf_max(r);
        for (const auto& x : sample_ball(space_.n(), r, samples, skip)) {
            const std::vector<double> y = eval(x);
            double norm_sq = 0.0;
            for (double c : y) norm_sq += c * c;
            if (!(std::sqrt(norm_sq) <= bound)) return false;
        }
        return true;
    }

private:
    void require_radius(double r) const {
        if (!(r > 0.0 && r < 1.0)) {
            throw std::invalid_argument("RadialMap: radius must lie in (0,1)");
        }
    }

    SpaceParams space_;
    RadialProfile profile_;
};

/// Radius of the ball with the given measure: (volume / Omega_n)^{1/n}.
inline double lower_radius_from_measure(const SpaceParams& space, double volume) {
    if (!(volume >= 0.0)) {
        throw std::invalid_argument("lower_radius_from_measure: volume must be >= 0");
    }
    return std::pow(volume / space.omega_n(), 1.0 / space.n());
}

}  // namespace pmodlab
