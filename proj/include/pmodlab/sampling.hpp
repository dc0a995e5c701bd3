#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pmodlab {

/// Van der Corput radical inverse in the given base.
inline double radical_inverse(std::uint64_t index, unsigned base) {
    double result = 0.0;
    double digit_weight = 1.0 / base;
    while (index > 0) {
        result += digit_weight * static_cast<double>(index % base);
        index /= base;
        digit_weight /= base;
    }
    return result;
}

/// Halton low-discrepancy sequence in [0,1)^dim. `skip` offsets the start
/// index and plays the role of a reproducibility seed.
class HaltonSequence {
public:
    explicit HaltonSequence(int dim, std::uint64_t skip = 0) : index_(1 + skip) {
        static constexpr unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                              23, 29, 31, 37, 41, 43, 47};
        constexpr int max_dim = static_cast<int>(sizeof(primes) / sizeof(primes[0]));
        if (dim < 1 || dim > max_dim) {
            throw std::invalid_argument("HaltonSequence: dimension must be in [1, 15]");
        }
        bases_.assign(primes, primes + dim);
    }

    std::vector<double> next() {
        std::vector<double> point(bases_.size());
        for (std::size_t d = 0; d < bases_.size(); ++d) {
            point[d] = radical_inverse(index_, bases_[d]);
        }
        ++index_;
        return point;
    }

private:
    std::vector<unsigned> bases_;
    std::uint64_t index_;
};

/// Deterministic quasi-random points in the open ball B(0, radius) of R^n,
/// via Halton points in the enclosing cube with rejection.
inline std::vector<std::vector<double>> sample_ball(int n, double radius, int count,
                                                    std::uint64_t skip = 0) {
    if (count < 1) throw std::invalid_argument("sample_ball: count must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("sample_ball: radius must be positive");
    HaltonSequence seq(n, skip);
    std::vector<std::vector<double>> points;
    points.reserve(count);
    // Rejection from the cube: acceptance ratio Omega_n / 2^n, fine at desk-scale n.
    const long max_draws = 4096L + 1024L * static_cast<long>(count) * (1L << n);
    for (long draw = 0; draw < max_draws && static_cast<int>(points.size()) < count; ++draw) {
        std::vector<double> u = seq.next();
        double norm_sq = 0.0;
        for (double& c : u) {
            c = radius * (2.0 * c - 1.0);
            norm_sq += c * c;
        }
        if (norm_sq < radius * radius) points.push_back(std::move(u));
    }
    if (static_cast<int>(points.size()) < count) {
        throw std::runtime_error("sample_ball: rejection sampling stalled");
    }
    return points;
}

}  // namespace pmodlab
