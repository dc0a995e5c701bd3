#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmodlab/distortion.hpp"
#include "pmodlab/quadrature.hpp"
#include "pmodlab/radial_map.hpp"
#include "pmodlab/space.hpp"
#include "pmodlab/trend.hpp"

namespace pmodlab {

/// Exact power-law representation q(r) = coeff * r^exponent.
struct PowerForm {
    double coeff;
    double exponent;
};

/// Radially symmetric weight Q(x) = q(|x|), q >= 0. Built-in kinds:
/// a constant, a radial power C|x|^s, or the inner p-distortion K_{I,p}
/// of a radial map.
class WeightField {
public:
    enum class Kind { Constant, RadialPower, FromMap };

    static WeightField constant(double value) {
        if (!(value >= 0.0)) {
            throw std::invalid_argument("WeightField::constant: value must be >= 0");
        }
        WeightField w;
        w.kind_ = Kind::Constant;
        w.coeff_ = value;
        w.exponent_ = 0.0;
        return w;
    }

    static WeightField radial_power(double coeff, double exponent) {
        if (!(coeff >= 0.0)) {
            throw std::invalid_argument("WeightField::radial_power: coefficient must be >= 0");
        }
        WeightField w;
        w.kind_ = Kind::RadialPower;
        w.coeff_ = coeff;
        w.exponent_ = exponent;
        return w;
    }

    static WeightField from_map(RadialMap map) {
        WeightField w;
        w.kind_ = Kind::FromMap;
        w.map_.emplace(std::move(map));
        return w;
    }

    Kind kind() const { return kind_; }
    const RadialMap& map() const { return *map_; }

    /// q(|x|) at radius r. For from_map weights this is k_ip itself, so the
    /// composition with the distortion module is exact.
    double at_radius(double r) const {
        switch (kind_) {
            case Kind::Constant:
                return coeff_;
            case Kind::RadialPower:
                return coeff_ == 0.0 ? 0.0 : coeff_ * std::pow(r, exponent_);
            case Kind::FromMap:
                return k_ip(*map_, r);
        }
        return 0.0;
    }

    /// Exact power-law form when one exists. K_{I,p} of a power profile
    /// rho(r) = a r^theta is a^{n-p} * thetafac * r^{(n-p)(theta-1)} with
    /// thetafac = theta^{1-p} for theta < 1 (minimal stretch is radial) and
    /// thetafac = theta for theta > 1 (minimal stretch is tangential).
    std::optional<PowerForm> power_form() const {
        switch (kind_) {
            case Kind::Constant:
            case Kind::RadialPower:
                return PowerForm{coeff_, exponent_};
            case Kind::FromMap: {
                const RadialProfile& rho = map_->profile();
                if (!rho.is_power()) return std::nullopt;
                const int n = map_->space().n();
                const double p = map_->space().p();
                const double theta = rho.exponent();
                const double theta_factor =
                    theta < 1.0 ? std::pow(theta, 1.0 - p) : (theta > 1.0 ? theta : 1.0);
                const double coeff = std::pow(rho.scale(), n - p) * theta_factor;
                return PowerForm{coeff, (n - p) * (theta - 1.0)};
            }
        }
        return std::nullopt;
    }

    /// Rescaled weight Q~(y) = s^{n-p} Q(s y). For from_map weights this is
    /// again the K_{I,p} of the rescaled map, an exact identity for radial
    /// maps since all stretches pick up one factor of s.
    WeightField rescaled(const SpaceParams& space, double s) const {
        if (!(s > 0.0 && s < 1.0)) {
            throw std::invalid_argument("WeightField::rescaled: scale must be in (0,1)");
        }
        const double factor = std::pow(s, space.n() - space.p());
        switch (kind_) {
            case Kind::Constant:
                return constant(factor * coeff_);
            case Kind::RadialPower:
                return radial_power(coeff_ * std::pow(s, space.n() - space.p() + exponent_),
                                    exponent_);
            case Kind::FromMap:
                return from_map(RadialMap(map_->space(), map_->profile().rescaled(s)));
        }
        throw std::logic_error("WeightField::rescaled: unreachable");
    }

private:
    WeightField() = default;

    Kind kind_ = Kind::Constant;
    double coeff_ = 0.0;
    double exponent_ = 0.0;
    std::optional<RadialMap> map_;
};

/// Strictly decreasing radii in (0,1) probing limits as eps -> 0.
class EpsLadder {
public:
    explicit EpsLadder(std::vector<double> eps) : values_(std::move(eps)) {
        if (values_.size() < 3) {
            throw std::invalid_argument("EpsLadder: need at least 3 radii");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0 && values_[i] < 1.0)) {
                throw std::invalid_argument("EpsLadder: radii must lie in (0,1)");
            }
            if (i > 0 && !(values_[i] < values_[i - 1])) {
                throw std::invalid_argument("EpsLadder: radii must be strictly decreasing");
            }
        }
    }

    static EpsLadder geometric(double start, double ratio, int count) {
        if (!(ratio > 0.0 && ratio < 1.0)) {
            throw std::invalid_argument("EpsLadder::geometric: ratio must be in (0,1)");
        }
        std::vector<double> v;
        v.reserve(count);
        double e = start;
        for (int i = 0; i < count; ++i, e *= ratio) v.push_back(e);
        return EpsLadder(std::move(v));
    }

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
};

namespace detail {

inline void require_space_match(const WeightField& w, const SpaceParams& space) {
    if (w.kind() == WeightField::Kind::FromMap &&
        (w.map().space().n() != space.n() || w.map().space().p() != space.p())) {
        throw std::invalid_argument("weight/space mismatch: from_map weight was built for "
                                    "different (n, p)");
    }
}

}  // namespace detail

/// Spherical mean q(r) of Q over S(0,r); for radial weights this is the
/// weight value at radius r, no surface quadrature needed.
inline double spherical_mean(const WeightField& w, const SpaceParams& space, double r) {
    detail::require_space_match(w, space);
    if (!(r > 0.0)) throw std::invalid_argument("spherical_mean: radius must be positive");
    return w.at_radius(r);
}

/// \int_{B(0,eps)} Q dm via the 1-D reduction omega_{n-1} \int_0^eps r^{n-1} q(r) dr.
/// Power-law weights use the closed form; a non-integrable singularity at 0
/// (power at 0 <= -1) is reported as +inf.
inline double ball_integral(const WeightField& w, const SpaceParams& space, double eps) {
    detail::require_space_match(w, space);
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("ball_integral: eps must lie in (0,1)");
    }
    const double omega = space.omega_sphere();
    if (auto pf = w.power_form()) {
        if (pf->coeff == 0.0) return 0.0;
        return omega * pf->coeff * power_integral(space.n() - 1 + pf->exponent, 0.0, eps);
    }
    const double value = integrate_singular_origin(
        [&](double r) { return std::pow(r, space.n() - 1) * w.at_radius(r); }, eps);
    return std::isfinite(value) ? value * omega : kInf;
}

/// Mean of Q over B(0,eps): ball_integral / (Omega_n eps^n).
inline double ball_average(const WeightField& w, const SpaceParams& space, double eps) {
    const double integral = ball_integral(w, space, eps);
    return integral / (space.omega_n() * std::pow(eps, space.n()));
}

/// Numerical surrogate for Q_0 = liminf of ball averages. `value` is the
/// minimum over the ladder; `trend` is the fitted log-log slope of average
/// vs eps (positive: averages vanish, Q_0 = 0; negative: they blow up,
/// Q_0 = inf; near zero: finite positive limit).
struct Q0Estimate {
    double value = 0.0;
    double trend = 0.0;
    bool divergent = false;  // some ball integral was non-finite (Q not in L^1_loc)
};

inline Q0Estimate q0_estimate(const WeightField& w, const SpaceParams& space,
                              const EpsLadder& ladder) {
    Q0Estimate est;
    std::vector<double> eps_fit, avg_fit;
    est.value = kInf;
    for (double eps : ladder.values()) {
        const double avg = ball_average(w, space, eps);
        if (std::isinf(avg)) {
            est.divergent = true;
            continue;
        }
        est.value = std::min(est.value, avg);
        if (avg > 0.0) {
            eps_fit.push_back(eps);
            avg_fit.push_back(avg);
        }
    }
    if (est.divergent) {
        est.value = kInf;
        est.trend = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    est.trend = eps_fit.size() >= 2 ? log_log_fit(eps_fit, avg_fit).slope
                                    : std::numeric_limits<double>::quiet_NaN();
    return est;
}

/// \int over the annulus A(0, r1, r2) of Q dm, 1-D reduction as above.
inline double annulus_integral(const WeightField& w, const SpaceParams& space, double r1,
                               double r2) {
    detail::require_space_match(w, space);
    if (!(r1 > 0.0 && r1 < r2)) {
        throw std::invalid_argument("annulus_integral: need 0 < r1 < r2");
    }
    const double omega = space.omega_sphere();
    if (auto pf = w.power_form()) {
        if (pf->coeff == 0.0) return 0.0;
        return omega * pf->coeff * power_integral(space.n() - 1 + pf->exponent, r1, r2);
    }
    const double value =
        integrate([&](double r) { return std::pow(r, space.n() - 1) * w.at_radius(r); }, r1, r2);
    return std::isfinite(value) ? value * omega : kInf;
}

/// \int over A(0, delta, eps0) of Q^alpha dm. Partial integrals as delta -> 0
/// diagnose membership of Q in L^alpha_loc: bounded partials mean integrable,
/// growth with a negative log-log slope in delta is the divergence signature.
inline double alpha_norm_on_annulus(const WeightField& w, const SpaceParams& space, double alpha,
                                    double delta, double eps0) {
    detail::require_space_match(w, space);
    if (!(alpha > 1.0)) {
        throw std::invalid_argument("alpha_norm_on_annulus: alpha must exceed 1");
    }
    if (!(delta > 0.0 && delta < eps0 && eps0 < 1.0)) {
        throw std::invalid_argument("alpha_norm_on_annulus: need 0 < delta < eps0 < 1");
    }
    const double omega = space.omega_sphere();
    if (auto pf = w.power_form()) {
        if (pf->coeff == 0.0) return 0.0;
        return omega * std::pow(pf->coeff, alpha) *
               power_integral(space.n() - 1 + alpha * pf->exponent, delta, eps0);
    }
    const double value = integrate(
        [&](double r) { return std::pow(r, space.n() - 1) * std::pow(w.at_radius(r), alpha); },
        delta, eps0);
    return std::isfinite(value) ? value * omega : kInf;
}

}  // namespace pmodlab
