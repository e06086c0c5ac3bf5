#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "censhadow/torus.hpp"

using namespace censhadow;
using Catch::Approx;

namespace {

Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

TorusPoint pt(std::initializer_list<double> v) { return TorusPoint(vec(v)); }

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

TorusPoint random_point(std::mt19937_64& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u01(rng);
    return TorusPoint(v);
}

}  // namespace

TEST_CASE("wrap reduces mod 1 into [0,1)") {
    CHECK(wrap(vec({1.25, -0.5})).c.isApprox(vec({0.25, 0.5})));
    CHECK(wrap(vec({0.0, 0.999})).c.isApprox(vec({0.0, 0.999})));
    CHECK(wrap(vec({2.0, -1.0})).c.norm() == 0.0);
    CHECK_THROWS_AS(wrap(vec({1.0, std::nan("")})), InvalidInput);
    CHECK_THROWS_AS(wrap(vec({std::numeric_limits<double>::infinity()})), InvalidInput);

    // a tiny negative value must not escape to 1.0
    const TorusPoint near_zero = wrap(vec({-1e-18}));
    CHECK(near_zero.c[0] >= 0.0);
    CHECK(near_zero.c[0] < 1.0);
}

TEST_CASE("wrap is idempotent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Vec raw(3);
        for (int j = 0; j < 3; ++j) raw[j] = 20.0 * (u01(rng) - 0.5);
        const TorusPoint once = wrap(raw);
        const TorusPoint twice = wrap(once.c);
        CHECK(once.c == twice.c);
    }
}

TEST_CASE("toral_dist measures the minimal representative") {
    CHECK(toral_dist(pt({0.95, 0.1}), pt({0.05, 0.1})) == Approx(0.1).margin(1e-15));
    CHECK(toral_dist(pt({0.3, 0.4}), pt({0.3, 0.4})) == 0.0);
    CHECK(toral_dist(pt({0.0, 0.0}), pt({0.5, 0.5})) == Approx(0.7071067811865476));
    CHECK_THROWS_AS(toral_dist(pt({0.1}), pt({0.1, 0.2})), InvalidInput);
}

TEST_CASE("toral_dist is a metric bounded by sqrt(n)/2") {
    std::mt19937_64 rng(11);
    const double cap = std::sqrt(3.0) / 2.0;
    for (int i = 0; i < 500; ++i) {
        const TorusPoint a = random_point(rng, 3);
        const TorusPoint b = random_point(rng, 3);
        const TorusPoint c = random_point(rng, 3);
        const double ab = toral_dist(a, b);
        CHECK(ab <= cap + 1e-15);
        CHECK(ab == Approx(toral_dist(b, a)).margin(1e-15));
        CHECK(ab <= toral_dist(a, c) + toral_dist(c, b) + 1e-12);
    }
}

TEST_CASE("chart_log picks the minimal representative") {
    CHECK(chart_log(pt({0.95}), pt({0.05})).v[0] == Approx(0.10).margin(1e-15));
    CHECK(chart_log(pt({0.3, 0.7}), pt({0.3, 0.7})).norm() == 0.0);
    const Displacement d = chart_log(pt({0.3, 0.7}), pt({0.35, 0.65}));
    CHECK(d.v[0] == Approx(0.05).margin(1e-15));
    CHECK(d.v[1] == Approx(-0.05).margin(1e-15));
    CHECK_THROWS_AS(chart_log(pt({0.0}), pt({0.5})), ChartDomainExceeded);
}

TEST_CASE("chart_exp wraps and rejects beyond the chart radius") {
    CHECK(chart_exp(pt({0.9}), Displacement(vec({0.2}))).c[0] == Approx(0.1).margin(1e-15));
    const TorusPoint x = pt({0.25, 0.75});
    CHECK(chart_exp(x, Displacement(vec({0.0, 0.0}))).c == x.c);
    CHECK_THROWS_AS(chart_exp(pt({0.0, 0.0}), Displacement(vec({0.4, 0.4}))),
                    ChartDomainExceeded);
}

TEST_CASE("chart roundtrip and flat-metric isometry") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint x = random_point(rng, 3);
        Vec v(3);
        for (int j = 0; j < 3; ++j) v[j] = 0.8 * (u01(rng) - 0.5);
        if (v.norm() >= 0.4) v *= 0.4 / v.norm() * u01(rng);
        const TorusPoint y = chart_exp(x, Displacement(v));
        const Displacement back = chart_log(x, y);
        CHECK((back.v - v).norm() < 1e-12);
        CHECK(toral_dist(x, y) == Approx(back.norm()).margin(1e-14));
        const TorusPoint again = chart_exp(x, back);
        CHECK(toral_dist(again, y) < 1e-14);
    }
}
