#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace pmodlab {

struct TrendFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares fit of log(y) = slope * log(x) + intercept. For exact power
/// laws the slope recovers the exponent to floating-point accuracy.
inline TrendFit log_log_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("log_log_fit: need >= 2 matching samples");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw std::invalid_argument("log_log_fit: samples must be finite and positive");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = count * sxx - sx * sx;
    TrendFit fit;
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
    return fit;
}

}  // namespace pmodlab
