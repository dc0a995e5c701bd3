#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pmodlab/radial_map.hpp"
#include "pmodlab/trend.hpp"

using Catch::Approx;
using namespace pmodlab;

namespace {

RadialMap power_map(int n, double p, double theta) {
    return RadialMap(SpaceParams(n, p), RadialProfile::power(theta));
}

}  // namespace

TEST_CASE("profile construction validates its parameters", "[radial-map]") {
    CHECK_THROWS_AS(RadialProfile::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(RadialProfile::power(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(RadialProfile::power(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RadialProfile::custom(nullptr, nullptr), std::invalid_argument);
}

TEST_CASE("eval reproduces the worked power maps", "[radial-map]") {
    const RadialMap identity = power_map(2, 3, 1.0);
    const std::vector<double> x{0.3, 0.4};
    const auto y = identity.eval(x);
    CHECK(y[0] == Approx(0.3).epsilon(1e-15));
    CHECK(y[1] == Approx(0.4).epsilon(1e-15));

    const RadialMap sqrt_map = power_map(2, 4, 0.5);
    const auto a = sqrt_map.eval(std::vector<double>{0.25, 0.0});
    CHECK(a[0] == Approx(0.5).epsilon(1e-13));
    CHECK(a[1] == 0.0);
    const auto b = sqrt_map.eval(std::vector<double>{0.0, 0.01});
    CHECK(b[0] == 0.0);
    CHECK(b[1] == Approx(0.1).epsilon(1e-13));
}

TEST_CASE("eval fixes the origin and rejects points outside the unit ball", "[radial-map]") {
    const RadialMap map = power_map(2, 3, 0.5);
    const auto origin = map.eval(std::vector<double>{0.0, 0.0});
    CHECK(origin[0] == 0.0);
    CHECK(origin[1] == 0.0);
    CHECK_THROWS_AS(map.eval(std::vector<double>{1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(map.eval(std::vector<double>{0.8, 0.8}), std::invalid_argument);
    CHECK_THROWS_AS(map.eval(std::vector<double>{0.1, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("lf_max equals the profile value", "[radial-map]") {
    CHECK(power_map(2, 3, 1.0).lf_max(0.7) == Approx(0.7).epsilon(1e-15));
    CHECK(power_map(2, 4, 0.5).lf_max(0.25) == Approx(0.5).epsilon(1e-15));
    // Theorem-3 style profile: theta = 2.1 at r = 0.5
    const double expected = std::pow(0.5, 2.1);
    CHECK(power_map(2, 3, 2.1).lf_max(0.5) == Approx(expected).epsilon(1e-15));
    CHECK(expected == Approx(0.2333).margin(5e-5));
    CHECK_THROWS_AS(power_map(2, 3, 1.0).lf_max(0.0), std::invalid_argument);
    CHECK_THROWS_AS(power_map(2, 3, 1.0).lf_max(1.0), std::invalid_argument);
}

TEST_CASE("image ball measure is Omega_n rho(r)^n", "[radial-map]") {
    CHECK(power_map(2, 3, 1.0).image_ball_measure(0.5) ==
          Approx(0.7853981633974483).epsilon(1e-13));
    CHECK(power_map(2, 4, 0.5).image_ball_measure(0.25) ==
          Approx(0.7853981633974483).epsilon(1e-13));
    CHECK(power_map(3, 4, 0.5).image_ball_measure(0.25) ==
          Approx(0.5235987755982988).epsilon(1e-12));
}

TEST_CASE("n=3 image measure agrees with a Monte Carlo volume of the image ball",
          "[radial-map]") {
    const RadialMap map = power_map(3, 4, 0.5);
    // f(B(0, 0.25)) is the ball of radius rho(0.25) = 0.5.
    const double mc = oracles::mc_ball_volume(3, map.lf_max(0.25), 2'000'000, 77031u);
    CHECK(std::abs(mc - map.image_ball_measure(0.25)) < 0.01);
}

TEST_CASE("sampled images stay inside the closed lf_max ball", "[radial-map]") {
    CHECK(power_map(2, 3, 1.0).check_ball_image_inclusion(0.5, 1000));
    CHECK(power_map(2, 4, 0.5).check_ball_image_inclusion(0.25, 1000));
    CHECK(power_map(2, 3, 2.1).check_ball_image_inclusion(0.5, 1000));
    CHECK(power_map(3, 5, 2.1).check_ball_image_inclusion(0.5, 500, 17));
    CHECK_THROWS_AS(power_map(2, 3, 1.0).check_ball_image_inclusion(0.5, 0),
                    std::invalid_argument);
}

TEST_CASE("lower_radius_from_measure inverts the ball measure", "[radial-map]") {
    const SpaceParams plane(2, 3);
    CHECK(lower_radius_from_measure(plane, plane.omega_n()) == Approx(1.0).epsilon(1e-15));
    CHECK(lower_radius_from_measure(plane, plane.omega_n() / 4.0) ==
          Approx(0.5).epsilon(1e-15));
    CHECK(lower_radius_from_measure(SpaceParams(3, 4), 0.5235987755982988) ==
          Approx(0.5).epsilon(1e-12));
    CHECK(lower_radius_from_measure(plane, 0.0) == 0.0);
    CHECK_THROWS_AS(lower_radius_from_measure(plane, -1.0), std::invalid_argument);
}

TEST_CASE("measure/radius/lf_max chain is an identity for radial maps", "[radial-map]") {
    for (double theta : {0.5, 0.9, 1.0, 1.7, 2.1}) {
        const RadialMap map = power_map(2, 3, theta);
        double previous = 0.0;
        for (double r : {0.05, 0.1, 0.3, 0.6, 0.9}) {
            const double rho = map.profile().value(r);
            CHECK(map.lf_max(r) == Approx(rho).epsilon(1e-14));
            CHECK(lower_radius_from_measure(map.space(), map.image_ball_measure(r)) ==
                  Approx(rho).epsilon(1e-12));
            CHECK(map.lf_max(r) > previous);  // strict monotonicity
            previous = map.lf_max(r);
        }
    }
}

TEST_CASE("lf_max(r)/r follows the power-law ratio r^{theta-1}", "[radial-map]") {
    std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
    for (double theta : {0.3, 0.5, 0.9, 1.5, 2.1}) {
        const RadialMap map = power_map(2, 4, theta);
        std::vector<double> ratios;
        for (double r : radii) ratios.push_back(map.lf_max(r) / r);
        CHECK(log_log_fit(radii, ratios).slope == Approx(theta - 1.0).margin(1e-12));
        if (theta < 1.0) {
            CHECK(ratios.back() > ratios.front());  // blows up toward the origin
        } else if (theta > 1.0) {
            CHECK(ratios.back() < ratios.front());  // vanishes toward the origin
        }
    }
}

TEST_CASE("rescaled profiles compose as rho(s t)", "[radial-map]") {
    const RadialProfile rho = RadialProfile::power(0.5);
    const RadialProfile scaled = rho.rescaled(0.25);
    CHECK(scaled.value(0.8) == Approx(rho.value(0.2)).epsilon(1e-14));
    CHECK(scaled.derivative(0.8) == Approx(0.25 * rho.derivative(0.2)).epsilon(1e-14));

    const RadialProfile custom = RadialProfile::custom(
        [](double r) { return std::sin(r); }, [](double r) { return std::cos(r); });
    const RadialProfile custom_scaled = custom.rescaled(0.5);
    CHECK(custom_scaled.value(0.6) == Approx(std::sin(0.3)).epsilon(1e-14));
    CHECK(custom_scaled.derivative(0.6) == Approx(0.5 * std::cos(0.3)).epsilon(1e-14));
}
