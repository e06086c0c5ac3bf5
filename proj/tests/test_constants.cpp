#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "censhadow/shadowing.hpp"

using namespace censhadow;
using Catch::Approx;

namespace {

HyperbolicityData golden_hyp() {
    HyperbolicityData h;
    h.nu = h.nu_hat = 0.3819660113;
    h.lambda = 2.6180339887;
    h.L0 = 1.0;
    h.delta0 = 0.1;
    h.l = 1;
    return h;
}

}  // namespace

TEST_CASE("constants engine reproduces the golden-ratio system values") {
    const HyperbolicityData hyp = golden_hyp();
    const double R = 2.6180339887;
    const ShadowConstants c = derive_constants(hyp, R, 0.1);

    CHECK(c.mu == 0.1);
    const double eq2 = (1.0 + c.mu) * (1.0 + c.mu) * hyp.L0 / hyp.lambda;
    CHECK(eq2 == Approx(0.46218).margin(5e-6));

    // independent algebraic route: L is 1.01 x the infimum of
    // L0 (1 + L (1+mu)/lambda)(1+mu) < L solved for L
    const double inf_L = hyp.L0 * 1.1 / (1.0 - hyp.L0 * 1.21 / hyp.lambda);
    CHECK(c.L == Approx(1.01 * inf_L).epsilon(1e-12));
    CHECK(c.L == Approx(2.0657).margin(1e-4));

    CHECK(c.L_cu == Approx((4.0 + 1.0 + 4.0 * R) * c.L).epsilon(1e-12));
    CHECK(c.L_cu == Approx(31.961).margin(2e-3));
    CHECK(c.L_cs == c.L_cu);
    CHECK(c.L1 == Approx(1.1 * c.L_cu).epsilon(1e-12));
    CHECK(c.L1 == Approx(35.157).margin(1e-2));
    CHECK(c.L_total == c.L1);  // 2L + 4 L0 = 8.13 is smaller here
    CHECK(c.L_total == Approx(35.157).margin(1e-2));

    CHECK(c.d0 > 0.0);
    CHECK(c.d0 < hyp.delta0 / (2.0 * c.L));
    // sweeps up to d = 1e-3 must be admissible for this system
    CHECK(c.d0 > 1e-3);
}

TEST_CASE("constants engine matches the built cat + id system") {
    Eigen::MatrixXd m(3, 3);
    m << 2, 1, 0, 1, 1, 0, 0, 0, 1;
    const SystemModel sys = build_linear(m);
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, 0.1);
    CHECK(c.L == Approx(2.0657).margin(1e-4));
    CHECK(c.L_total == Approx(35.157).margin(1e-2));
}

TEST_CASE("infeasible rate is rejected") {
    HyperbolicityData hyp = golden_hyp();
    hyp.lambda = 1.5;
    hyp.L0 = 1.2;
    CHECK_THROWS_AS(derive_constants(hyp, 2.0, 0.1), ConstantsInfeasible);
}

TEST_CASE("mu hint is taken when admissible, ladder otherwise") {
    const HyperbolicityData hyp = golden_hyp();
    CHECK(derive_constants(hyp, 2.0, 0.05).mu == 0.05);
    // a hint violating the margin falls back to the largest ladder value
    const ShadowConstants c = derive_constants(hyp, 2.0, 0.9);
    CHECK(c.mu == 0.5);  // (1.5)^2 / 2.618 = 0.859 <= 0.9
    CHECK(derive_constants(hyp, 2.0).mu == 0.5);
}

TEST_CASE("derived constants satisfy their invariants across the rate range") {
    for (double lambda : {2.1, 2.62, 4.0, 10.0, 100.0})
        for (double L0 : {1.0, 1.02, 1.3}) {
            if (!(lambda > 2.0 * L0)) continue;
            HyperbolicityData hyp = golden_hyp();
            hyp.lambda = lambda;
            hyp.L0 = L0;
            for (double R : {1.0, lambda, 3.0 * lambda}) {
                const ShadowConstants c = derive_constants(hyp, R, 0.1);
                INFO("lambda " << lambda << " L0 " << L0 << " R " << R);
                CHECK((1.0 + c.mu) * (1.0 + c.mu) * L0 / lambda < 1.0);
                CHECK(L0 * (1.0 + c.L * (1.0 + c.mu) / lambda) * (1.0 + c.mu) < c.L);
                CHECK(c.d0 < hyp.delta0 / (2.0 * c.L));
                CHECK(c.L_cu == Approx(4 * L0 * c.L + c.L + 4 * R * L0 * c.L).epsilon(1e-12));
                CHECK(c.L1 == Approx((1 + c.mu) * std::max(c.L_cs, c.L_cu)).epsilon(1e-12));
                CHECK(c.L_total == std::max(c.L1, 2 * c.L + 4 * L0));
                CHECK(4.0 * L0 * c.L * c.d0 < hyp.delta0);
            }
        }
}
