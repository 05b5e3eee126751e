#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "optexpand/elliptic.hpp"

using optexpand::elliptic::ellip_f;
using optexpand::elliptic::ellip_pi;

namespace {

// Independent oracle: adaptive quadrature of the defining integrals in the
// amplitude variable x = sin(theta), which removes the x = 1 singularity.
double oracle_f(double z, double m) {
    auto f = [m](double th) {
        const double s = std::sin(th);
        return 1.0 / std::sqrt(1.0 - m * s * s);
    };
    double err;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, std::asin(z), 15, 1e-14, &err);
}

double oracle_pi(double n, double z, double m) {
    auto f = [n, m](double th) {
        const double s2 = std::sin(th) * std::sin(th);
        return 1.0 / ((1.0 - n * s2) * std::sqrt(1.0 - m * s2));
    };
    double err;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, std::asin(z), 15, 1e-14, &err);
}

} // namespace

TEST_CASE("first kind: fixed values") {
    CHECK(ellip_f(0.0, 0.3) == 0.0);
    CHECK(ellip_f(0.0, -5.0) == 0.0);
    CHECK_THAT(ellip_f(1.0, 0.0), Catch::Matchers::WithinAbs(std::numbers::pi / 2, 1e-14));
    CHECK_THAT(ellip_f(0.5, 0.3), Catch::Matchers::WithinAbs(oracle_f(0.5, 0.3), 1e-10));
}

TEST_CASE("first kind agrees with quadrature oracle") {
    for (double z : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999}) {
        for (double m : {-2.0, -0.5, 0.0, 0.3, 0.7, 0.95}) {
            if (m * z * z >= 1.0) continue;
            INFO("z=" << z << " m=" << m);
            CHECK_THAT(ellip_f(z, m), Catch::Matchers::WithinAbs(oracle_f(z, m), 1e-10));
        }
    }
}

TEST_CASE("first kind is strictly increasing in z") {
    for (double m : {-1.0, 0.0, 0.5, 0.9}) {
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double z = double(i) / 20.0;
            const double v = ellip_f(z, m);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("third kind: reductions and fixed values") {
    CHECK(ellip_pi(-0.8, 0.0, 0.4) == 0.0);
    for (double z : {0.2, 0.5, 0.9}) {
        for (double m : {-0.5, 0.0, 0.6}) {
            CHECK_THAT(ellip_pi(0.0, z, m),
                       Catch::Matchers::WithinAbs(ellip_f(z, m), 1e-12));
        }
    }
    CHECK_THAT(ellip_pi(-0.8, 0.6, 0.4),
               Catch::Matchers::WithinAbs(oracle_pi(-0.8, 0.6, 0.4), 1e-10));
}

TEST_CASE("third kind agrees with quadrature oracle, negative characteristics included") {
    for (double z : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double m : {-1.0, 0.0, 0.4, 0.8}) {
            for (double n : {-5.0, -1.5, -0.3, 0.4, 0.9}) {
                if (m * z * z >= 1.0 || n * z * z >= 0.99) continue;
                INFO("n=" << n << " z=" << z << " m=" << m);
                CHECK_THAT(ellip_pi(n, z, m),
                           Catch::Matchers::WithinAbs(oracle_pi(n, z, m), 1e-10));
            }
        }
    }
}

TEST_CASE("characteristics above 1 work when the pole lies outside the range") {
    // n z^2 < 1 keeps the integrand regular even for n > 1.
    const double n = 3.0, z = 0.5, m = 0.2;
    CHECK_THAT(ellip_pi(n, z, m), Catch::Matchers::WithinAbs(oracle_pi(n, z, m), 1e-10));
}

TEST_CASE("elliptic domain errors") {
    CHECK_THROWS_AS(ellip_f(1.2, 0.0), std::domain_error);
    CHECK_THROWS_AS(ellip_f(-0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(ellip_f(1.0, 1.0), std::domain_error);   // m z^2 = 1
    CHECK_THROWS_AS(ellip_pi(4.0, 0.6, 0.2), std::domain_error); // pole crossed
    CHECK_THROWS_AS(ellip_pi(1.0 / 0.36, 0.6, 0.2), std::domain_error); // pole at z
}
