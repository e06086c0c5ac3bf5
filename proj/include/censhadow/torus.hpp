/*
 * torus.hpp — flat-torus point arithmetic and canonical charts.
 *
 * Points live on T^n = R^n / Z^n with coordinates canonicalized to [0,1).
 * The flat metric makes the exponential charts exact: for toral_dist(x,y)
 * below the injectivity-radius bound 0.5, chart_log returns the unique
 * minimal representative v with wrap(x + v) = y and |v| = toral_dist(x,y),
 * so the chart is an isometry (distortion factor exactly 1).
 */

#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "censhadow/errors.hpp"

namespace censhadow {

using Vec = Eigen::VectorXd;

// Hard chart radius: half the injectivity-radius bound of the unit torus.
inline constexpr double kChartRadius = 0.5;

// A chart tangent vector, in units of torus coordinate. Valid as a chart
// argument only while its Euclidean norm stays below kChartRadius.
struct Displacement {
    Vec v;

    Displacement() = default;
    explicit Displacement(Vec comps) : v(std::move(comps)) {}

    int dim() const { return static_cast<int>(v.size()); }
    double norm() const { return v.norm(); }
};

// A point on T^n; every coordinate lies in [0,1).
struct TorusPoint {
    Vec c;

    TorusPoint() = default;
    explicit TorusPoint(Vec coords) : c(std::move(coords)) {}

    int dim() const { return static_cast<int>(c.size()); }
};

// Reduces raw coordinates mod 1 into [0,1).
inline TorusPoint wrap(const Vec& raw) {
    if (!raw.allFinite())
        throw InvalidInput("wrap: non-finite coordinate");
    Vec out(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        double r = raw[i] - std::floor(raw[i]);
        if (r >= 1.0) r -= 1.0;  // floor rounding can land exactly on 1
        if (r < 0.0) r += 1.0;
        out[i] = r;
    }
    return TorusPoint(out);
}

inline TorusPoint wrap(const TorusPoint& x, const Displacement& d) {
    return wrap(Vec(x.c + d.v));
}

namespace detail {

// Minimal representative of y - x on the covering space, coordinatewise in
// [-0.5, 0.5]; ties at exactly 0.5 resolve toward the positive value.
inline Vec minimal_rep(const Vec& x, const Vec& y) {
    Vec r = y - x;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        r[i] -= std::round(r[i]);
        if (r[i] == -0.5) r[i] = 0.5;
    }
    return r;
}

inline void check_same_dim(const TorusPoint& x, const TorusPoint& y, const char* who) {
    if (x.dim() != y.dim())
        throw InvalidInput(std::string(who) + ": dimension mismatch");
}

}  // namespace detail

// Distance induced by the flat metric: Euclidean norm of the minimal
// representative difference. Bounded by sqrt(n)/2.
inline double toral_dist(const TorusPoint& x, const TorusPoint& y) {
    detail::check_same_dim(x, y, "toral_dist");
    return detail::minimal_rep(x.c, y.c).norm();
}

// Inverse exponential chart at x: the unique v with wrap(x + v) = y and
// |v| = toral_dist(x, y). Requires the distance to stay below the chart
// radius; at or beyond it the minimal representative is ambiguous.
inline Displacement chart_log(const TorusPoint& x, const TorusPoint& y) {
    detail::check_same_dim(x, y, "chart_log");
    Vec v = detail::minimal_rep(x.c, y.c);
    if (v.norm() >= kChartRadius)
        throw ChartDomainExceeded("chart_log: points at or beyond the cut locus");
    return Displacement(std::move(v));
}

// Exponential chart at x. Left inverse of chart_log where both are defined.
inline TorusPoint chart_exp(const TorusPoint& x, const Displacement& d) {
    if (x.dim() != d.dim())
        throw InvalidInput("chart_exp: dimension mismatch");
    if (d.norm() >= kChartRadius)
        throw ChartDomainExceeded("chart_exp: displacement exceeds chart radius");
    return wrap(x, d);
}

}  // namespace censhadow
