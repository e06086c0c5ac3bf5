#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "censhadow/shadowing.hpp"

using namespace censhadow;
using Catch::Approx;

namespace {

Eigen::MatrixXd cat_id() {
    Eigen::MatrixXd m(3, 3);
    m << 2, 1, 0, 1, 1, 0, 0, 0, 1;
    return m;
}

const double kMuS = (3.0 - std::sqrt(5.0)) / 2.0;
const double kMuU = (3.0 + std::sqrt(5.0)) / 2.0;

TorusPoint pt3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return TorusPoint(v);
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// trajectory whose one-step error is exactly eps along the given direction
Pseudotrajectory directed_error_traj(const SystemModel& sys, const TorusPoint& x0, int N,
                                     double eps, const Vec& dir) {
    Pseudotrajectory traj;
    traj.d = eps * (1.0 + 1e-10);
    traj.points.push_back(x0);
    for (int k = 0; k < N; ++k)
        traj.points.push_back(
            chart_exp(apply(sys, traj.points.back()), Displacement(eps * dir)));
    return traj;
}

// s-coordinates of the one-step errors, decomposed against the frame
std::vector<double> error_coords(const SystemModel& sys, const Pseudotrajectory& traj,
                                 int block_offset) {
    std::vector<double> e;
    for (int k = 0; k + 1 < traj.size(); ++k) {
        const Vec w = chart_log(apply(sys, traj[k]), traj[k + 1]).v;
        e.push_back((sys.frame_inv * w)(block_offset));
    }
    return e;
}

}  // namespace

TEST_CASE("h_s_step is the identity correction on a true orbit") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const TorusPoint x = pt3(0.1, 0.2, 0.3);
    const TorusPoint fx = apply(sys, x);
    const HStep h = h_s_step(sys, x, fx, Vec::Zero(1), c, 0.0);
    CHECK(h.z_next.norm() == 0.0);
    CHECK(h.weak_dist == 0.0);
}

TEST_CASE("h_s_step matches the closed-form oblique projection") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const double d = 1e-4;
    std::mt19937_64 rng(71);
    for (int i = 0; i < 300; ++i) {
        const TorusPoint x = pt3(u01(rng), u01(rng), u01(rng));
        Vec e(3);
        for (int j = 0; j < 3; ++j) e[j] = d * (2.0 * u01(rng) - 1.0) / 2.0;
        const TorusPoint x_next = chart_exp(apply(sys, x), Displacement(e));
        Vec z(1);
        z(0) = c.L * d * (2.0 * u01(rng) - 1.0);

        const HStep h = h_s_step(sys, x, x_next, z, c, d);

        // closed form: z' = mu_s z - e_s with e_s the oblique s-coordinate
        const Vec w = chart_log(apply(sys, x), x_next).v;
        const double e_s = (sys.frame_inv * w)(0);
        CHECK(h.z_next(0) == Approx(kMuS * z(0) - e_s).margin(1e-12));
    }
}

TEST_CASE("h_s_step at the precondition boundary keeps the Lemma-1 chain") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const double d = 1e-4;
    const Vec vs = sys.frame.basis_s.col(0);
    const TorusPoint x = pt3(0.37, 0.59, 0.11);
    const TorusPoint x_next = chart_exp(apply(sys, x), Displacement(d * vs));
    Vec z(1);
    z(0) = c.L * d;
    const HStep h = h_s_step(sys, x, x_next, z, c, d);
    CHECK(std::abs(h.z_next(0)) <= kMuS * c.L * d + d + 1e-15);
    CHECK(std::abs(h.z_next(0)) < c.L * d);

    z(0) = 1.5 * c.L * d;
    CHECK_THROWS_AS(h_s_step(sys, x, x_next, z, c, d), InvalidInput);
}

TEST_CASE("h_s_step propagates intersection failure") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const TorusPoint x = pt3(0.1, 0.2, 0.3);
    const TorusPoint garbage = pt3(0.6, 0.7, 0.8);
    CHECK_THROWS_AS(h_s_step(sys, x, garbage, Vec::Zero(1), c, 1e-4), TooFarApart);
}

TEST_CASE("stable_pass on a true orbit returns the orbit") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const Pseudotrajectory orbit = generate_noisy(sys, pt3(0.1, 0.2, 0.3), 80, 0.0, 1);
    const PassResult res = stable_pass(sys, orbit, c);
    CHECK(res.max_abs_z == 0.0);
    for (int k = 0; k < orbit.size(); ++k) CHECK(res.y[k].c == orbit[k].c);
}

TEST_CASE("stable_pass converges to the geometric-series fixed point") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const double eps = 1e-4;
    const Pseudotrajectory traj =
        directed_error_traj(sys, pt3(0.1, 0.2, 0.3), 120, eps, sys.frame.basis_s.col(0));
    const PassResult res = stable_pass(sys, traj, c);

    const double z_star = -eps / (1.0 - kMuS);
    CHECK(z_star == Approx(-1.6180339887e-4).epsilon(1e-9));
    for (int k = 0; k < traj.size(); ++k) {
        const double transient = std::pow(kMuS, k) * std::abs(z_star);
        CHECK(std::abs(res.z.values[k](0) - z_star) <= transient * (1.0 + 1e-9) + 1e-15);
    }
    CHECK(res.z.values[100](0) == Approx(z_star).margin(1e-14));
}

TEST_CASE("stable_pass equals the series oracle on seeded noise") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const Pseudotrajectory traj = generate_noisy(sys, pt3(0.1, 0.2, 0.3), 200, 1e-4, 2024);
    const PassResult res = stable_pass(sys, traj, c);
    const std::vector<double> oracle = linear_series_oracle(error_coords(sys, traj, 0), kMuS);
    REQUIRE(oracle.size() == res.z.values.size());
    for (size_t k = 0; k < oracle.size(); ++k)
        CHECK(res.z.values[k](0) == Approx(oracle[k]).margin(1e-12));
    CHECK(res.max_pair_residual <= 1e-9);
    CHECK(res.max_abs_z <= c.L * traj.d);
    CHECK(res.max_point_dist <= 2.0 * c.L * traj.d);
}

TEST_CASE("re-applying the h-step reproduces the recursion") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const Pseudotrajectory traj = generate_noisy(sys, pt3(0.1, 0.2, 0.3), 100, 1e-4, 5);
    const PassResult res = stable_pass(sys, traj, c);
    for (int k = 0; k + 1 < traj.size(); ++k) {
        const HStep h = h_s_step(sys, traj[k], traj[k + 1], res.z.values[k], c, traj.d);
        CHECK((h.z_next - res.z.values[k + 1]).norm() < 1e-12);
    }
}

TEST_CASE("unstable_pass converges to the backward fixed point") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const double eps = 1e-4;
    const int N = 120;
    const Pseudotrajectory traj =
        directed_error_traj(sys, pt3(0.1, 0.2, 0.3), N, eps, sys.frame.basis_u.col(0));
    const PassResult res = unstable_pass(sys, traj, c);

    const double z_star = eps / (kMuU - 1.0);
    CHECK(z_star == Approx(6.180339887e-5).epsilon(1e-9));
    for (int k = 0; k <= N; ++k) {
        const double transient = std::pow(kMuU, -(N - k)) * std::abs(z_star);
        CHECK(std::abs(res.z.values[k](0) - z_star) <= transient * (1.0 + 1e-9) + 1e-15);
    }
    CHECK(res.z.values[10](0) == Approx(z_star).margin(1e-14));
}

TEST_CASE("unstable_pass equals the backward series oracle") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const Pseudotrajectory traj = generate_noisy(sys, pt3(0.1, 0.2, 0.3), 200, 1e-4, 2025);
    const PassResult res = unstable_pass(sys, traj, c);
    const std::vector<double> oracle =
        backward_series_oracle(error_coords(sys, traj, 2), kMuU);
    REQUIRE(oracle.size() == res.z.values.size());
    for (size_t k = 0; k < oracle.size(); ++k)
        CHECK(res.z.values[k](0) == Approx(oracle[k]).margin(1e-12));
}

TEST_CASE("stable_pass on the reversed system equals unstable_pass") {
    const SystemModel sys = build_linear(cat_id());
    const SystemModel rev = build_linear(sys.mat_inv);
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const ShadowConstants c_rev = derive_constants(rev.hyp, rev.R, 0.1);

    const Pseudotrajectory traj = generate_noisy(sys, pt3(0.1, 0.2, 0.3), 150, 1e-4, 31);
    Pseudotrajectory reversed;
    reversed.points.assign(traj.points.rbegin(), traj.points.rend());
    reversed.d = validate(rev, reversed).max_error * (1.0 + 1e-12);

    const PassResult forward = stable_pass(rev, reversed, c_rev);
    const PassResult backward = unstable_pass(sys, traj, c);
    // the reversed stable basis is the original unstable eigendirection
    REQUIRE((rev.frame.basis_s - sys.frame.basis_u).norm() < 1e-12);
    const int N = traj.size() - 1;
    for (int k = 0; k <= N; ++k)
        CHECK(forward.z.values[k](0) ==
              Approx(backward.z.values[N - k](0)).margin(1e-12));
}

TEST_CASE("series oracles") {
    CHECK_THROWS_AS(linear_series_oracle({1.0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(backward_series_oracle({1.0}, 0.5), InvalidInput);

    const std::vector<double> zeros(10, 0.0);
    for (double z : linear_series_oracle(zeros, 0.4)) CHECK(z == 0.0);

    // single impulse e(0) = 1: z_k = -mu^{k-1} afterwards
    std::vector<double> impulse(8, 0.0);
    impulse[0] = 1.0;
    const std::vector<double> z = linear_series_oracle(impulse, 0.25);
    CHECK(z[0] == 0.0);
    for (size_t k = 1; k < z.size(); ++k)
        CHECK(z[k] == Approx(-std::pow(0.25, k - 1)).margin(1e-15));

    // constant errors approach the geometric limits
    const std::vector<double> ones(200, 1e-4);
    CHECK(linear_series_oracle(ones, kMuS).back() ==
          Approx(-1e-4 / (1.0 - kMuS)).epsilon(1e-10));
    CHECK(backward_series_oracle(ones, kMuU).front() ==
          Approx(1e-4 / (kMuU - 1.0)).epsilon(1e-10));
}

TEST_CASE("combine merges the stable and unstable corrections") {
    const SystemModel sys = build_linear(cat_id());
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    const double d = 1e-4;
    std::mt19937_64 rng(73);
    const Vec vs = sys.frame.basis_s.col(0);
    const Vec vu = sys.frame.basis_u.col(0);

    SECTION("identical inputs are returned unchanged") {
        std::vector<TorusPoint> pts;
        for (int i = 0; i < 20; ++i) pts.push_back(pt3(u01(rng), u01(rng), u01(rng)));
        const std::vector<TorusPoint> y = combine(sys, pts, pts, c, d);
        for (size_t k = 0; k < pts.size(); ++k) CHECK(y[k].c == pts[k].c);
    }

    SECTION("components come from the matching pass") {
        for (int i = 0; i < 100; ++i) {
            const TorusPoint x = pt3(u01(rng), u01(rng), u01(rng));
            const double a = c.L * d * (2.0 * u01(rng) - 1.0);
            const double b = c.L * d * (2.0 * u01(rng) - 1.0);
            const TorusPoint ys = chart_exp(x, Displacement(a * vs));
            const TorusPoint yu = chart_exp(x, Displacement(b * vu));
            const std::vector<TorusPoint> y = combine(sys, {ys}, {yu}, c, d);
            CHECK(toral_dist(y[0], chart_exp(x, Displacement(a * vs + b * vu))) < 1e-13);
        }
    }

    SECTION("distant inputs are rejected") {
        const TorusPoint x = pt3(0.1, 0.2, 0.3);
        const TorusPoint far = chart_exp(x, Displacement(10.0 * c.L * d * vu));
        CHECK_THROWS_AS(combine(sys, {x}, {far}, c, d), TooFarApart);
    }
}
