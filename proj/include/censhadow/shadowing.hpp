/*
 * shadowing.hpp — the constructive central shadowing pipeline.
 *
 * Given a d-pseudotrajectory {x_k} of a partially hyperbolic, dynamically
 * coherent model system, the pipeline produces a central pseudotrajectory
 * {y_k} with sup_k dist(x_k, y_k) <= L_total * d, where every one-step
 * defect is a jump of size at most L_total * d along the central leaf:
 *
 *   1. derive_constants  picks the slack mu with (1+mu)^2 L0 / lambda < 1,
 *      the Lipschitz constant L with L0 (1 + L(1+mu)/lambda)(1+mu) < L,
 *      the admissible step d0 < delta0 / 2L, and the bookkeeping constants
 *      L_cu = 4 L0 L + L + 4 R L0 L, L1 = (1+mu) max(L_cs, L_cu),
 *      L_total = max(L1, 2L + 4 L0).
 *
 *   2. stable_pass  runs the forward recursion z_0 = 0,
 *      z_{k+1} = h_k^s(z_k), where h_k^s maps the stable chart coordinate
 *      through p = W^s(x_{k+1}) ∩ W^cu(f(exp^s_{x_k}(z)));  every step is
 *      checked against the |z| <= L d bound. Since h_k^s contracts in z at
 *      rate 1/lambda, the recursion converges to the bi-infinite fixed
 *      point away from the window boundary at geometric rate.
 *
 *   3. unstable_pass  is the time mirror: z_N = 0 and z_k is pulled back
 *      through f^-1 and the W^u/W^cs intersection.
 *
 *   4. combine  intersects W^s(y^u_k) with W^cu(y^s_k), merging the stable
 *      correction of the forward pass with the unstable correction of the
 *      backward pass; the remaining defect lies exactly in the central
 *      direction and is measured by verify_central.
 *
 * When lambda <= 2 L0 the pipeline first passes to f^l with the minimal l
 * such that lambda^l > 2 L0, corrects every l-th point, fills intermediate
 * points with true orbit segments, and certifies against the effective
 * constant reported in ShadowingResult::L_effective (equal to L_total when
 * l = 1).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "censhadow/errors.hpp"
#include "censhadow/pseudotraj.hpp"
#include "censhadow/systems.hpp"
#include "censhadow/torus.hpp"

namespace censhadow {

struct ShadowConstants {
    double mu = 0;       // chart-distortion slack, in (0,1)
    double L = 0;        // Lemma-1 Lipschitz constant, > 1
    double d0 = 0;       // admissible one-step error
    double R = 0;        // sup |Df|
    double L_cu = 0;     // 4 L0 L + L + 4 R L0 L
    double L_cs = 0;
    double L1 = 0;       // (1+mu) max(L_cs, L_cu)
    double L_total = 0;  // max(L1, 2L + 4 L0)
};

inline constexpr double kEq2Margin = 0.9;   // required slack in (1+mu)^2 L0/lambda
inline constexpr double kEq5Safety = 1.01;  // L over the Eq-5 infimum

// Derives the shadowing constants for a system whose lambda already
// satisfies lambda > 2 L0 (apply system_power first otherwise). mu_hint is
// used when it meets the Eq-2 margin; otherwise the largest slack from the
// {5, 2.5, 1} x 10^-k ladder is taken.
inline ShadowConstants derive_constants(const HyperbolicityData& hyp, double R,
                                        std::optional<double> mu_hint = std::nullopt) {
    if (!(R > 0) || !std::isfinite(R))
        throw InvalidInput("derive_constants: R must be positive and finite");
    if (!(hyp.lambda > 2.0 * hyp.L0)) {
        std::ostringstream os;
        os << "derive_constants: lambda = " << hyp.lambda << " does not exceed 2 L0 = "
           << 2.0 * hyp.L0 << "; raise the power l first";
        throw ConstantsInfeasible(os.str());
    }
    auto eq2 = [&](double mu) { return (1.0 + mu) * (1.0 + mu) * hyp.L0 / hyp.lambda; };

    ShadowConstants c;
    c.R = R;
    if (mu_hint && *mu_hint > 0 && *mu_hint < 1 && eq2(*mu_hint) <= kEq2Margin) {
        c.mu = *mu_hint;
    } else {
        c.mu = -1;
        const double steps[] = {5.0, 2.5, 1.0};
        for (double decade = 0.1; decade >= 1e-9 && c.mu < 0; decade /= 10.0)
            for (double s : steps) {
                const double mu = s * decade;
                if (mu < 1.0 && eq2(mu) <= kEq2Margin) {
                    c.mu = mu;
                    break;
                }
            }
        if (c.mu < 0)
            throw ConstantsInfeasible("derive_constants: no mu satisfies (1+mu)^2 L0/lambda < 1");
    }

    const double denom = 1.0 - hyp.L0 * (1.0 + c.mu) * (1.0 + c.mu) / hyp.lambda;
    c.L = kEq5Safety * hyp.L0 * (1.0 + c.mu) / denom;
    c.L_cu = 4.0 * hyp.L0 * c.L + c.L + 4.0 * R * hyp.L0 * c.L;
    c.L_cs = c.L_cu;  // time-symmetric bound with the same derivative cap
    c.L1 = (1.0 + c.mu) * std::max(c.L_cs, c.L_cu);
    c.L_total = std::max(c.L1, 2.0 * c.L + 4.0 * hyp.L0);
    c.d0 = 0.99 * hyp.delta0 *
           std::min({1.0 / (2.0 * c.L), 1.0 / (4.0 * hyp.L0 * c.L),
                     1.0 / c.L_cu, 1.0 / c.L_cs});

    // the defining inequalities must hold strictly
    if (!(eq2(c.mu) < 1.0) ||
        !(hyp.L0 * (1.0 + c.L * (1.0 + c.mu) / hyp.lambda) * (1.0 + c.mu) < c.L) ||
        !(c.d0 < hyp.delta0 / (2.0 * c.L)))
        throw ConstantsInfeasible("derive_constants: derived constants violate their invariants");
    return c;
}

// One application of the stable h-step map (chart coordinates at x_k to
// chart coordinates at x_next). Also reports the recorded leaf distances of
// the intermediate intersection.
struct HStep {
    Vec z_next;
    double weak_dist = 0;    // dist_cu(q, p), bounded by L d
    double strong_dist = 0;  // dist_s(x_next, p)
};

inline HStep h_s_step(const SystemModel& sys, const TorusPoint& x_k,
                      const TorusPoint& x_next, const Vec& z,
                      const ShadowConstants& c, double d) {
    const double bound = c.L * d;
    if (z.norm() > bound * (1.0 + 1e-12))
        throw InvalidInput("h_s_step: |z| exceeds L d");
    const TorusPoint q = apply(sys, strong_chart_point(sys, x_k, z, StrongDir::Stable));
    const LeafIntersection li =
        leaf_intersection(sys, x_next, q, LeafPair::StableCU, sys.hyp.delta0);
    HStep out;
    out.z_next = strong_chart_coord(sys, x_next, li.point, StrongDir::Stable);
    out.weak_dist = li.weak_dist;
    out.strong_dist = li.strong_dist;
    if (out.z_next.norm() > bound || out.weak_dist > bound) {
        std::ostringstream os;
        os << "h_s_step: Lemma 1 bound violated (|z'| = " << out.z_next.norm()
           << ", dist_cu = " << out.weak_dist << ", L d = " << bound << ")";
        throw Lemma1Violation(os.str());
    }
    return out;
}

// The u-side mirror: pulls the chart coordinate at x_next back to x_k
// through f^-1 and the W^u(x_k) ∩ W^cs side. The pullback sees the
// reversed-trajectory step |Df^-1| d, so the intermediate cs-certificate is
// bounded by L0 (1+mu)(R_inv + L(1+mu)/lambda) d rather than L d; the L d
// bounds of the mirror lemma apply to |z| and to the forward pair
// dist_cs(f(y^u_k), y^u_{k+1}), which the pass re-checks.
inline HStep h_u_step(const SystemModel& sys, const TorusPoint& x_k,
                      const TorusPoint& x_next, const Vec& z_next,
                      const ShadowConstants& c, double d) {
    const double bound = c.L * d;
    if (z_next.norm() > bound * (1.0 + 1e-12))
        throw InvalidInput("h_u_step: |z| exceeds L d");
    const TorusPoint q =
        apply_inverse(sys, strong_chart_point(sys, x_next, z_next, StrongDir::Unstable));
    const LeafIntersection li =
        leaf_intersection(sys, x_k, q, LeafPair::UnstableCS, sys.hyp.delta0);
    HStep out;
    out.z_next = strong_chart_coord(sys, x_k, li.point, StrongDir::Unstable);
    out.weak_dist = li.weak_dist;
    out.strong_dist = li.strong_dist;
    const double pullback_bound = sys.hyp.L0 * (1.0 + c.mu) *
                                  (sys.R_inv + c.L * (1.0 + c.mu) / sys.hyp.lambda) * d;
    if (out.z_next.norm() > bound || out.weak_dist > pullback_bound) {
        std::ostringstream os;
        os << "h_u_step: mirror Lemma 1 bound violated (|z'| = " << out.z_next.norm()
           << ", dist_cs = " << out.weak_dist << ", L d = " << bound << ")";
        throw Lemma1Violation(os.str());
    }
    return out;
}

// The correction sequence of one pass: chart coordinates z_k in the strong
// subbundle at x_k, all bounded by L d.
struct CorrectionSequence {
    std::vector<Vec> values;
    double bound = 0;  // L d
};

struct PassResult {
    std::vector<TorusPoint> y;  // corrected points, one per trajectory index
    CorrectionSequence z;
    double max_abs_z = 0;
    double max_weak_dist = 0;      // sup of recorded dist_cu / dist_cs (<= L d)
    double max_point_dist = 0;     // sup dist(x_k, y_k) (<= 2 L d)
    double max_pair_residual = 0;  // transversal residuals of the pair checks
    long lemma1_violations = 0;    // always 0 in a completed pass
};

namespace detail {

inline void check_step(const Pseudotrajectory& traj, const ShadowConstants& c,
                       const char* who) {
    if (traj.size() < 2) throw InvalidInput(std::string(who) + ": need at least two points");
    if (traj.d > c.d0) {
        std::ostringstream os;
        os << who << ": step d = " << traj.d << " exceeds admissible d0 = " << c.d0;
        throw StepTooLarge(os.str(), c.d0);
    }
}

}  // namespace detail

// Forward pass: z_0 = seed (zero by default), z_{k+1} = h_k^s(z_k), with
// y^s_k = exp^s_{x_k}(z_k). Verifies y^s_{k+1} ∈ W^cu_{Ld}(f(y^s_k)) and
// dist(x_k, y^s_k) <= 2 L d at every index.
inline PassResult stable_pass(const SystemModel& sys, const Pseudotrajectory& traj,
                              const ShadowConstants& c,
                              std::optional<Vec> seed = std::nullopt) {
    detail::check_step(traj, c, "stable_pass");
    const int dim_s = sys.frame.s();
    if (dim_s == 0) throw InvalidInput("stable_pass: system has no stable directions");
    const double bound = c.L * traj.d;
    PassResult out;
    out.z.bound = bound;
    Vec z = seed.value_or(Vec(Vec::Zero(dim_s)));
    if (z.size() != dim_s || z.norm() > bound * (1.0 + 1e-12))
        throw InvalidInput("stable_pass: seed outside I_{Ld}");
    out.z.values.push_back(z);
    out.y.push_back(strong_chart_point(sys, traj[0], z, StrongDir::Stable));
    for (int k = 0; k + 1 < traj.size(); ++k) {
        const HStep h = h_s_step(sys, traj[k], traj[k + 1], z, c, traj.d);
        z = h.z_next;
        out.z.values.push_back(z);
        out.y.push_back(strong_chart_point(sys, traj[k + 1], z, StrongDir::Stable));
        out.max_abs_z = std::max(out.max_abs_z, z.norm());
        out.max_weak_dist = std::max(out.max_weak_dist, h.weak_dist);
        // Eq-(Add7.1) membership of the realized pair
        const WeakOffset wo =
            weak_leaf_offset(sys, apply(sys, out.y[static_cast<size_t>(k)]),
                             out.y[static_cast<size_t>(k) + 1], LeafPair::StableCU);
        out.max_pair_residual = std::max(out.max_pair_residual, wo.residual);
        if (wo.residual > kLeafTol || wo.dist > bound * (1.0 + 1e-9) + 1e-18) {
            ++out.lemma1_violations;
            std::ostringstream os;
            os << "stable_pass: pair " << k << " escapes W^cu_{Ld} (residual "
               << wo.residual << ", dist " << wo.dist << ")";
            throw Lemma1Violation(os.str());
        }
    }
    for (int k = 0; k < traj.size(); ++k) {
        const double dist = toral_dist(traj[k], out.y[static_cast<size_t>(k)]);
        out.max_point_dist = std::max(out.max_point_dist, dist);
        if (dist > 2.0 * bound + 1e-18) {
            ++out.lemma1_violations;
            throw Lemma1Violation("stable_pass: dist(x_k, y^s_k) exceeds 2 L d");
        }
    }
    return out;
}

// Backward pass: z_N = seed, z_k = h_k^u(z_{k+1}); the mirror bounds are
// checked with the roles of f and f^-1 exchanged.
inline PassResult unstable_pass(const SystemModel& sys, const Pseudotrajectory& traj,
                                const ShadowConstants& c,
                                std::optional<Vec> seed = std::nullopt) {
    detail::check_step(traj, c, "unstable_pass");
    const int dim_u = sys.frame.u();
    if (dim_u == 0) throw InvalidInput("unstable_pass: system has no unstable directions");
    const int n_pts = traj.size();
    const double bound = c.L * traj.d;
    PassResult out;
    out.z.bound = bound;
    out.z.values.assign(static_cast<size_t>(n_pts), Vec());
    out.y.assign(static_cast<size_t>(n_pts), TorusPoint());
    Vec z = seed.value_or(Vec(Vec::Zero(dim_u)));
    if (z.size() != dim_u || z.norm() > bound * (1.0 + 1e-12))
        throw InvalidInput("unstable_pass: seed outside I_{Ld}");
    out.z.values.back() = z;
    out.y.back() = strong_chart_point(sys, traj[n_pts - 1], z, StrongDir::Unstable);
    for (int k = n_pts - 2; k >= 0; --k) {
        const HStep h = h_u_step(sys, traj[k], traj[k + 1], z, c, traj.d);
        z = h.z_next;
        out.z.values[static_cast<size_t>(k)] = z;
        out.y[static_cast<size_t>(k)] =
            strong_chart_point(sys, traj[k], z, StrongDir::Unstable);
        out.max_abs_z = std::max(out.max_abs_z, z.norm());
        out.max_weak_dist = std::max(out.max_weak_dist, h.weak_dist);
        const WeakOffset wo =
            weak_leaf_offset(sys, apply(sys, out.y[static_cast<size_t>(k)]),
                             out.y[static_cast<size_t>(k) + 1], LeafPair::UnstableCS);
        out.max_pair_residual = std::max(out.max_pair_residual, wo.residual);
        if (wo.residual > kLeafTol || wo.dist > bound * (1.0 + 1e-9) + 1e-18) {
            ++out.lemma1_violations;
            std::ostringstream os;
            os << "unstable_pass: pair " << k << " escapes W^cs_{Ld} (residual "
               << wo.residual << ", dist " << wo.dist << ")";
            throw Lemma1Violation(os.str());
        }
    }
    for (int k = 0; k < n_pts; ++k) {
        const double dist = toral_dist(traj[k], out.y[static_cast<size_t>(k)]);
        out.max_point_dist = std::max(out.max_point_dist, dist);
        if (dist > 2.0 * bound + 1e-18) {
            ++out.lemma1_violations;
            throw Lemma1Violation("unstable_pass: dist(x_k, y^u_k) exceeds 2 L d");
        }
    }
    return out;
}

// Merges the two passes: y_k = W^s(y^u_k) ∩ W^cu(y^s_k), leaf distances
// bounded by 4 L0 L d.
inline std::vector<TorusPoint> combine(const SystemModel& sys,
                                       const std::vector<TorusPoint>& y_s,
                                       const std::vector<TorusPoint>& y_u,
                                       const ShadowConstants& c, double d) {
    if (y_s.size() != y_u.size() || y_s.empty())
        throw InvalidInput("combine: sequence length mismatch");
    const double radius = 4.0 * c.L * d;
    if (radius > 0 && !(sys.hyp.L0 * radius < sys.hyp.delta0))
        throw TooFarApart("combine: 4 L0 L d exceeds delta0");
    std::vector<TorusPoint> y;
    y.reserve(y_s.size());
    for (size_t k = 0; k < y_s.size(); ++k) {
        if ((y_u[k].c.array() == y_s[k].c.array()).all()) {
            y.push_back(y_s[k]);  // coincident inputs (true orbits, d = 0)
            continue;
        }
        if (toral_dist(y_s[k], y_u[k]) >= radius)
            throw TooFarApart("combine: dist(y^s_k, y^u_k) >= 4 L d at index " +
                              std::to_string(k));
        y.push_back(
            leaf_intersection(sys, y_u[k], y_s[k], LeafPair::StableCU,
                              std::min(radius, sys.hyp.delta0))
                .point);
    }
    return y;
}

// Bounded solution of z_{k+1} = mu_s z_k - e_s(k) with z_0 = 0, by direct
// summation: z_k = -sum_{j<k} mu_s^j e_s(k-1-j). Independent oracle for the
// stable pass on linear systems.
inline std::vector<double> linear_series_oracle(const std::vector<double>& errors_s,
                                                double mu_s) {
    if (!(std::abs(mu_s) < 1))
        throw InvalidInput("linear_series_oracle: |mu_s| must be < 1");
    std::vector<double> z(errors_s.size() + 1, 0.0);
    for (size_t k = 1; k < z.size(); ++k) {
        double acc = 0.0;
        double pw = 1.0;
        for (size_t j = 0; j < k; ++j) {
            acc -= pw * errors_s[k - 1 - j];
            pw *= mu_s;
        }
        z[k] = acc;
    }
    return z;
}

// Bounded solution of the expanding mirror z_k = (z_{k+1} + e_u(k)) / mu_u
// with z_N = 0: z_k = sum_{j>=0} mu_u^{-(j+1)} e_u(k+j).
inline std::vector<double> backward_series_oracle(const std::vector<double>& errors_u,
                                                  double mu_u) {
    if (!(std::abs(mu_u) > 1))
        throw InvalidInput("backward_series_oracle: |mu_u| must be > 1");
    const size_t n = errors_u.size();
    std::vector<double> z(n + 1, 0.0);
    for (size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        double pw = 1.0 / mu_u;
        for (size_t j = 0; k + j < n; ++j) {
            acc += pw * errors_u[k + j];
            pw /= mu_u;
        }
        z[k] = acc;
    }
    return z;
}

// ---------------------------------------------------------------------------
// End-to-end construction
// ---------------------------------------------------------------------------

struct ShadowingResult {
    Pseudotrajectory y;                   // the central pseudotrajectory
    std::vector<TorusPoint> y_s, y_u;     // pass outputs (powered indices)
    std::vector<CentralJumpRecord> jumps;
    double sup_dist = 0;                  // max_k dist(x_k, y_k)
    double max_central_jump = 0;
    double max_residual = 0;
    ShadowConstants constants;            // of the working (powered) system
    HyperbolicityData hyp;
    int l = 1;                            // applied power reduction
    double d_input = 0;
    double d_power = 0;                   // step bound of the powered trajectory
    double L_effective = 0;               // certification constant for the input step
    double orbit_defect = -1;             // center dimension 0 only
    long lemma1_violations = 0;
    bool certified = false;
    std::string diagnostic;
};

// Full pipeline. Throws StepTooLarge / InvalidInput on inadmissible input;
// internal bound violations come back as an uncertified result with a
// diagnostic instead.
inline ShadowingResult central_shadow(const SystemModel& sys, const Pseudotrajectory& traj,
                                      std::optional<double> mu_hint = 0.1) {
    if (traj.size() < 2) throw InvalidInput("central_shadow: need at least two points");
    {
        const ValidationReport rep = validate(sys, traj);
        if (!rep.pass) {
            std::ostringstream os;
            os << "central_shadow: input is not a d-pseudotrajectory (claimed d = "
               << traj.d << ", measured " << rep.max_error << " at k = " << rep.worst_index
               << ")";
            throw InvalidInput(os.str());
        }
    }

    ShadowingResult res;
    res.d_input = traj.d;
    res.l = sys.hyp.l;

    // power reduction: correct every l-th point of the original trajectory
    SystemModel work = (res.l == 1) ? sys : system_power(sys, res.l);
    res.hyp = work.hyp;
    double step_sum = 1.0;  // 1 + R + ... + R^{l-1} of the base system
    double r_pow = 1.0;     // R^{l-1}
    for (int i = 1; i < res.l; ++i) {
        r_pow *= sys.R;
        step_sum += r_pow;
    }
    Pseudotrajectory work_traj;
    if (res.l == 1) {
        work_traj = traj;
    } else {
        if (traj.steps() < res.l)
            throw InvalidInput("central_shadow: trajectory shorter than the power window");
        work_traj.d = traj.d * step_sum;
        for (int k = 0; k < traj.size(); k += res.l) work_traj.points.push_back(traj[k]);
    }
    res.d_power = work_traj.d;

    res.constants = derive_constants(work.hyp, work.R, mu_hint);
    if (work_traj.d > res.constants.d0) {
        const double admissible = res.constants.d0 / step_sum;
        std::ostringstream os;
        os << "central_shadow: d = " << traj.d << " exceeds the admissible d0 = "
           << admissible;
        throw StepTooLarge(os.str(), admissible);
    }
    res.L_effective = (res.l == 1)
                          ? res.constants.L_total
                          : r_pow * res.constants.L_total * step_sum + (step_sum - r_pow);

    try {
        const PassResult sp = stable_pass(work, work_traj, res.constants);
        const PassResult up = unstable_pass(work, work_traj, res.constants);
        res.y_s = sp.y;
        res.y_u = up.y;
        res.lemma1_violations = sp.lemma1_violations + up.lemma1_violations;
        const std::vector<TorusPoint> y_w =
            combine(work, sp.y, up.y, res.constants, work_traj.d);

        // expand back to the original step: true orbit segments between the
        // corrected points
        res.y.d = res.L_effective * traj.d;
        if (res.l == 1) {
            res.y.points = y_w;
        } else {
            res.y.points.reserve(static_cast<size_t>(traj.size()));
            for (int k = 0; k < traj.size(); ++k) {
                const int j = k / res.l;
                if (k % res.l == 0 && static_cast<size_t>(j) < y_w.size()) {
                    res.y.points.push_back(y_w[static_cast<size_t>(j)]);
                } else {
                    res.y.points.push_back(apply(sys, res.y.points.back()));
                }
            }
        }
    } catch (const Lemma1Violation& e) {
        res.certified = false;
        res.diagnostic = e.what();
        ++res.lemma1_violations;
        return res;
    } catch (const TooFarApart& e) {
        res.certified = false;
        res.diagnostic = e.what();
        return res;
    } catch (const Error& e) {
        res.certified = false;
        res.diagnostic = e.what();
        return res;
    }

    // certification: measured sup distance, central jumps, residuals
    res.sup_dist = shadowing_distance(traj, res.y);
    const double eps = res.L_effective * traj.d;
    const CentralVerification cv = verify_central(sys, res.y, eps);
    res.jumps = cv.jumps;
    res.max_central_jump = cv.max_central;
    res.max_residual = cv.max_residual;
    res.certified = cv.pass && res.sup_dist <= eps && res.lemma1_violations == 0;
    if (!cv.pass)
        res.diagnostic = "central verification failed";
    else if (res.sup_dist > eps)
        res.diagnostic = "sup distance exceeds L_total d";

    if (sys.frame.c() == 0) {
        // Anosov degeneration: the output must be a true orbit
        double defect = 0;
        for (int k = 0; k + 1 < res.y.size(); ++k)
            defect = std::max(defect, toral_dist(apply(sys, res.y[k]), res.y[k + 1]));
        res.orbit_defect = defect;
        if (defect > 1e-10) {
            res.certified = false;
            res.diagnostic = "center dimension 0 but output is not a true orbit";
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Plaque-expansivity probe (report-only; the conjecture is open)
// ---------------------------------------------------------------------------

struct PlaqueComparison {
    int first = 0, second = 0;          // seed indices
    std::vector<double> point_dist;      // per-k toral distance
    std::vector<double> central_dist;    // per-k central offset
    std::vector<double> residual;        // per-k distance from the central leaf
};

struct PlaqueReport {
    std::vector<ShadowingResult> runs;   // one per seed
    std::vector<PlaqueComparison> pairs;
};

// Reruns the pipeline with the stable pass seeded at each given chart
// displacement and compares the resulting central pseudotrajectories. No
// pass/fail semantics: uniqueness of the corrected sequences is equivalent
// to the plaque expansivity conjecture.
inline PlaqueReport plaque_probe(const SystemModel& sys, const Pseudotrajectory& traj,
                                 const std::vector<Vec>& seeds,
                                 std::optional<double> mu_hint = 0.1) {
    if (sys.hyp.l != 1)
        throw InvalidInput("plaque_probe: supported at power l = 1 only");
    const ShadowConstants c = derive_constants(sys.hyp, sys.R, mu_hint);
    detail::check_step(traj, c, "plaque_probe");
    PlaqueReport rep;
    const PassResult up = unstable_pass(sys, traj, c);
    for (const Vec& seed : seeds) {
        if (seed.size() != sys.frame.s() || seed.norm() > c.L * traj.d * (1.0 + 1e-12))
            throw InvalidInput("plaque_probe: seed outside the I_{Ld} ball");
        const PassResult sp = stable_pass(sys, traj, c, seed);
        ShadowingResult run;
        run.constants = c;
        run.hyp = sys.hyp;
        run.d_input = traj.d;
        run.L_effective = c.L_total;
        run.y_s = sp.y;
        run.y_u = up.y;
        run.y.d = c.L_total * traj.d;
        run.y.points = combine(sys, sp.y, up.y, c, traj.d);
        const CentralVerification cv = verify_central(sys, run.y, c.L_total * traj.d);
        run.jumps = cv.jumps;
        run.max_central_jump = cv.max_central;
        run.max_residual = cv.max_residual;
        run.sup_dist = shadowing_distance(traj, run.y);
        run.certified = cv.pass && run.sup_dist <= c.L_total * traj.d;
        rep.runs.push_back(std::move(run));
    }
    for (size_t i = 0; i < rep.runs.size(); ++i)
        for (size_t j = i + 1; j < rep.runs.size(); ++j) {
            PlaqueComparison cmp;
            cmp.first = static_cast<int>(i);
            cmp.second = static_cast<int>(j);
            const auto& yi = rep.runs[i].y;
            const auto& yj = rep.runs[j].y;
            for (int k = 0; k < yi.size(); ++k) {
                cmp.point_dist.push_back(toral_dist(yi[k], yj[k]));
                const CentralOffset off = central_offset(sys, yi[k], yj[k]);
                cmp.central_dist.push_back(off.dist_c);
                cmp.residual.push_back(off.residual);
            }
            rep.pairs.push_back(std::move(cmp));
        }
    return rep;
}

}  // namespace censhadow
