/*
 * systems.hpp — concrete partially hyperbolic, dynamically coherent systems
 * on the flat torus, with exact foliation oracles.
 *
 * Two families are supported:
 *
 *   LinearPH       f(x) = M x mod 1 for a unimodular integer matrix M whose
 *                  eigenvalue moduli split into (<1), (=1), (>1). The
 *                  invariant bundles are the real eigenspace sums; leaves are
 *                  affine subspaces, so every leaf metric is Euclidean and
 *                  every oracle is a linear solve against the frame.
 *
 *   SkewProductPH  f(x, th) = (A x mod 1, th + phi(x) mod 1) on T^3 over an
 *                  Anosov base A, with phi(x) = c0 + c1 sin(2 pi x1). The
 *                  center foliation is the circle fibers; W^cs and W^cu are
 *                  flat cylinders over the base eigenlines. Strong leaves
 *                  are the synchronization graphs
 *
 *                    theta(y) = theta(x) + sum_{k>=0} [phi(A^k x) - phi(A^k y)]
 *
 *                  (forward sum for W^s, the mirrored backward sum for W^u),
 *                  convergent at the base contraction rate. Strong-leaf
 *                  charts are parametrized by signed base arc length; inner
 *                  leaf distances integrate the graph slope by quadrature.
 *
 * Splitting rates: |Df v| <= nu |v| on E^s, >= 1/nu_hat on E^u, and
 * gamma = gamma_hat = 1 on E^c, measured in the bundle metric of each
 * family (Euclidean for LinearPH, base projection on the strong bundles of
 * skew products). lambda = min(1/nu, 1/nu_hat) > 1 is the two-sided
 * contraction rate, L0 bounds the transversality of the local leaf
 * intersection, delta0 = 0.1 is the locality radius.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "censhadow/errors.hpp"
#include "censhadow/torus.hpp"

namespace censhadow {

inline constexpr double kDelta0 = 0.1;      // locality radius for all toral models
inline constexpr double kLeafTol = 1e-9;    // "on the leaf" transversal tolerance
inline constexpr double kCenterTol = 1e-9;  // |modulus - 1| below this is central
inline constexpr double kCondCap = 1e8;     // frame condition-number cap
inline constexpr double kSeriesTolDefault = 1e-12;

enum class SystemKind { LinearPH, SkewProductPH };

// Which local intersection the Statement-style solver produces.
enum class LeafPair {
    StableCU,    // z = W^s(x) ∩ W^cu(y)
    UnstableCS,  // z = W^u(x) ∩ W^cs(y)
};

enum class StrongDir { Stable, Unstable };

// Orthonormal bases of the invariant splitting E^s ⊕ E^c ⊕ E^u, columns are
// unit vectors. For skew products this is the x-independent skeleton (zero
// graph slope); frame_at() tilts the strong columns by the local slope.
struct SplitFrame {
    Eigen::MatrixXd basis_s;
    Eigen::MatrixXd basis_c;
    Eigen::MatrixXd basis_u;

    int s() const { return static_cast<int>(basis_s.cols()); }
    int c() const { return static_cast<int>(basis_c.cols()); }
    int u() const { return static_cast<int>(basis_u.cols()); }
    int n() const { return static_cast<int>(basis_s.rows()); }

    Eigen::MatrixXd full() const {
        Eigen::MatrixXd f(n(), s() + c() + u());
        f << basis_s, basis_c, basis_u;
        return f;
    }
};

struct HyperbolicityData {
    double nu = 0;         // stable rate, in (0,1); 0 when E^s is empty
    double nu_hat = 0;     // inverse unstable rate, in (0,1); 0 when E^u is empty
    double gamma = 1;      // center lower rate
    double gamma_hat = 1;  // center upper rate
    double lambda = 0;     // min(1/nu, 1/nu_hat) > 1
    double L0 = 1;         // transversality constant, > 1
    double delta0 = kDelta0;
    int m = 1;             // power at which the rate inequalities hold
    int l = 1;             // minimal power with lambda^l > 2 L0
};

struct SystemModel {
    SystemKind kind = SystemKind::LinearPH;
    int n = 0;
    int power = 1;  // this model represents f_base^power

    // LinearPH: powered map and its exact integer inverse (entries are
    // integers stored in doubles; magnitudes validated against 2^53).
    Eigen::MatrixXd mat;
    Eigen::MatrixXd mat_inv;

    // SkewProductPH: Anosov base data and the one-harmonic fiber map
    // phi(x) = c0 + c1 sin(2 pi x1).
    Eigen::Matrix2d base = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d base_inv = Eigen::Matrix2d::Zero();
    Eigen::Vector2d vs = Eigen::Vector2d::Zero();  // unit stable eigenvector
    Eigen::Vector2d vu = Eigen::Vector2d::Zero();  // unit unstable eigenvector
    double mu_s = 0, mu_u = 0;                     // signed base eigenvalues
    double c0 = 0, c1 = 0;
    double lip_phi = 0;      // Lip(phi) = 2 pi |c1|
    double slope_s_sup = 0;  // sup_x |d theta / d t| over W^s graphs (sampled)
    double slope_u_sup = 0;

    SplitFrame frame;
    HyperbolicityData hyp;
    double series_tol = kSeriesTolDefault;
    double R = 0;      // sup_x |Df(x)| of the powered map
    double R_inv = 0;  // sup_x |Df^-1(x)|
    double frame_cond = 1;

    // LinearPH caches: frame inverse, the three oblique projections, and
    // joint orthonormal bases of E^cu / E^cs for leaf residuals.
    Eigen::MatrixXd frame_inv;
    Eigen::MatrixXd proj_s, proj_c, proj_u;
    Eigen::MatrixXd ortho_cu, ortho_cs;
};

namespace detail {

inline double op_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

inline double cond_number(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(sv.size() - 1);
}

inline void require_integer_entries(const Eigen::MatrixXd& m, const char* who) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j)) || std::abs(m(i, j) - std::round(m(i, j))) > 1e-9)
                throw InvalidSystem(std::string(who) + ": matrix entries must be integers");
            if (std::abs(m(i, j)) > 9.0e15)
                throw InvalidSystem(std::string(who) + ": integer entry exceeds exact double range");
        }
}

// Fraction-free determinant of a small integer matrix (Bareiss).
inline long long int_det(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = static_cast<long long>(std::llround(m(i, j)));
    long long prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Exact inverse of a unimodular integer matrix: double solve, rounded and
// verified against the identity.
inline Eigen::MatrixXd unimodular_inverse(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd inv = m.fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    inv = inv.array().round().matrix();
    if (!(m * inv).isApprox(Eigen::MatrixXd::Identity(n, n), 1e-9))
        throw InvalidSystem("matrix is not unimodular (no integer inverse)");
    return inv;
}

// Roots of the characteristic polynomial. Closed form for n <= 3 with the
// cubic discriminant classified in exact integer arithmetic; the general
// eigensolver beyond that.
inline std::vector<std::complex<double>> char_roots(const Eigen::MatrixXd& m) {
    using cd = std::complex<double>;
    const int n = static_cast<int>(m.rows());
    std::vector<cd> roots;
    if (n == 1) {
        roots.emplace_back(m(0, 0), 0);
    } else if (n == 2) {
        const long long tr = std::llround(m(0, 0) + m(1, 1));
        const long long det = int_det(m);
        const long long disc = tr * tr - 4 * det;
        if (disc >= 0) {
            const double sq = std::sqrt(static_cast<double>(disc));
            roots.emplace_back((tr + sq) / 2.0, 0);
            roots.emplace_back((tr - sq) / 2.0, 0);
        } else {
            const double sq = std::sqrt(static_cast<double>(-disc));
            roots.emplace_back(tr / 2.0, sq / 2.0);
            roots.emplace_back(tr / 2.0, -sq / 2.0);
        }
    } else if (n == 3) {
        // x^3 + a x^2 + b x + c with exact integer coefficients
        const long long a = -std::llround(m.trace());
        const long long m01 = std::llround(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
        const long long m02 = std::llround(m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0));
        const long long m12 = std::llround(m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
        const long long b = m01 + m02 + m12;
        const long long c = -int_det(m);
        // depressed cubic t^3 + p t + q, x = t - a/3. With p = p3/3 and
        // q = q27/27 the discriminant satisfies
        //   27 disc = 27 (-4 p^3 - 27 q^2) = -(4 p3^3 + q27^2),
        // so its sign is classified in exact integer arithmetic.
        const long long p3 = 3 * b - a * a;
        const long long q27 = 2 * a * a * a - 9 * a * b + 27 * c;
        const __int128 disc27 = -(4 * static_cast<__int128>(p3) * p3 * p3 +
                                  static_cast<__int128>(q27) * q27);
        const double p = static_cast<double>(p3) / 3.0;
        const double q = static_cast<double>(q27) / 27.0;
        const double shift = -static_cast<double>(a) / 3.0;
        if (disc27 > 0) {
            // three distinct real roots, trigonometric form
            const double r = 2.0 * std::sqrt(-p / 3.0);
            const double phi = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0));
            for (int k = 0; k < 3; ++k)
                roots.emplace_back(shift + r * std::cos((phi - 2.0 * M_PI * k) / 3.0), 0);
        } else if (disc27 < 0) {
            // one real root and a complex pair
            const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
            const double u = std::cbrt(-q / 2.0 + s);
            const double v = std::cbrt(-q / 2.0 - s);
            roots.emplace_back(shift + u + v, 0);
            const double re = shift - (u + v) / 2.0;
            const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
            roots.emplace_back(re, im);
            roots.emplace_back(re, -im);
        } else {
            // repeated real roots
            if (p3 == 0) {
                for (int k = 0; k < 3; ++k) roots.emplace_back(shift, 0);
            } else {
                const double t_double = -3.0 * q / (2.0 * p);
                const double t_simple = 3.0 * q / p;
                roots.emplace_back(shift + t_simple, 0);
                roots.emplace_back(shift + t_double, 0);
                roots.emplace_back(shift + t_double, 0);
            }
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
        for (Eigen::Index i = 0; i < m.rows(); ++i) roots.push_back(es.eigenvalues()(i));
    }
    return roots;
}

// Deterministic sign: make the largest-magnitude component positive.
inline void normalize_column_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
}

// Real basis of the invariant subspace for one eigenvalue cluster. Real
// roots contribute ker(M - r I); a conjugate pair contributes the real and
// imaginary parts of the complex kernel. A kernel short of the algebraic
// multiplicity signals a Jordan block.
inline Eigen::MatrixXd cluster_subspace(const Eigen::MatrixXd& m, std::complex<double> root,
                                        int multiplicity) {
    const int n = static_cast<int>(m.rows());
    if (std::abs(root.imag()) < 1e-9) {
        Eigen::MatrixXd shifted = m - root.real() * Eigen::MatrixXd::Identity(n, n);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
        lu.setThreshold(1e-8);
        if (lu.dimensionOfKernel() < multiplicity)
            throw NotPartiallyHyperbolic("defective eigenvalue (nontrivial Jordan block)");
        return lu.kernel().leftCols(multiplicity);
    }
    Eigen::MatrixXcd shifted =
        m.cast<std::complex<double>>() - root * Eigen::MatrixXcd::Identity(n, n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
    lu.setThreshold(1e-8);
    if (lu.dimensionOfKernel() < multiplicity)
        throw NotPartiallyHyperbolic("defective complex eigenvalue (nontrivial Jordan block)");
    Eigen::MatrixXcd ker = lu.kernel().leftCols(multiplicity);
    Eigen::MatrixXd out(n, 2 * multiplicity);
    for (int j = 0; j < multiplicity; ++j) {
        out.col(2 * j) = ker.col(j).real();
        out.col(2 * j + 1) = ker.col(j).imag();
    }
    return out;
}

inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& block) {
    if (block.cols() == 0) return block;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), block.cols());
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        auto col = q.col(j);
        normalize_column_sign(col);
    }
    return q;
}

inline int minimal_l(double lambda, double L0) {
    int l = 1;
    double pw = lambda;
    while (pw <= 2.0 * L0) {
        ++l;
        pw *= lambda;
        if (l > 512) throw ConstantsInfeasible("lambda too close to 1: no admissible power l");
    }
    return l;
}

// 16-point Gauss-Legendre nodes and weights on [-1,1], generated by Newton
// iteration on the Legendre polynomial.
struct GaussLegendre16 {
    std::array<double, 16> x{}, w{};
    GaussLegendre16() {
        constexpr int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 1.0, p1 = 0.0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
                }
                const double dp = n * (t * p0 - p1) / (t * t - 1.0);
                const double step = p0 / dp;
                t -= step;
                if (std::abs(step) < 1e-15) break;
            }
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            const double dp = n * (t * p0 - p1) / (t * t - 1.0);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre16& gl16() {
    static const GaussLegendre16 table;
    return table;
}

inline Eigen::Vector2d wrap2(Eigen::Vector2d p) {
    p(0) -= std::floor(p(0));
    p(1) -= std::floor(p(1));
    return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Map application
// ---------------------------------------------------------------------------

inline double fiber_increment(const SystemModel& sys, const Eigen::Vector2d& xb) {
    return sys.c0 + sys.c1 * std::sin(2.0 * M_PI * xb(0));
}

inline TorusPoint apply(const SystemModel& sys, const TorusPoint& x) {
    if (x.dim() != sys.n) throw InvalidInput("apply: dimension mismatch");
    if (sys.kind == SystemKind::LinearPH) return wrap(Vec(sys.mat * x.c));
    TorusPoint p = x;
    for (int i = 0; i < sys.power; ++i) {
        const Eigen::Vector2d xb = p.c.head<2>();
        Vec out(3);
        out.head<2>() = sys.base * xb;
        out(2) = p.c(2) + fiber_increment(sys, xb);
        p = wrap(out);
    }
    return p;
}

inline TorusPoint apply_inverse(const SystemModel& sys, const TorusPoint& x) {
    if (x.dim() != sys.n) throw InvalidInput("apply_inverse: dimension mismatch");
    if (sys.kind == SystemKind::LinearPH) return wrap(Vec(sys.mat_inv * x.c));
    TorusPoint p = x;
    for (int i = 0; i < sys.power; ++i) {
        const Eigen::Vector2d yb = detail::wrap2(sys.base_inv * p.c.head<2>());
        Vec out(3);
        out.head<2>() = yb;
        out(2) = p.c(2) - fiber_increment(sys, yb);
        p = wrap(out);
    }
    return p;
}

// Jacobian of the (powered) map at x. Constant for LinearPH; a cocycle
// product along the base orbit for skew products.
inline Eigen::MatrixXd differential(const SystemModel& sys, const TorusPoint& x) {
    if (sys.kind == SystemKind::LinearPH) return sys.mat;
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    TorusPoint p = x;
    for (int i = 0; i < sys.power; ++i) {
        Eigen::Matrix3d step = Eigen::Matrix3d::Zero();
        step.topLeftCorner<2, 2>() = sys.base;
        step(2, 0) = 2.0 * M_PI * sys.c1 * std::cos(2.0 * M_PI * p.c(0));
        step(2, 2) = 1.0;
        d = step * d;
        const Eigen::Vector2d xb = p.c.head<2>();
        Vec out(3);
        out.head<2>() = sys.base * xb;
        out(2) = p.c(2) + fiber_increment(sys, xb);
        p = wrap(out);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Skew-product strong-leaf series
// ---------------------------------------------------------------------------

namespace detail {

// Fiber offset along the strong stable (forward sum, decay nu) or strong
// unstable (backward sum, decay nu_hat) leaf of the skew product; `t` is
// the signed base offset along the eigenline. Truncated when the geometric
// tail bound drops below series_tol.
inline double skew_fiber_offset(const SystemModel& sys, const Eigen::Vector2d& xb,
                                double t, StrongDir dir) {
    if (t == 0.0 || sys.c1 == 0.0) return 0.0;
    const bool stable = (dir == StrongDir::Stable);
    const Eigen::Vector2d axis = stable ? sys.vs : sys.vu;
    const double rate = stable ? std::abs(sys.mu_s) : 1.0 / std::abs(sys.mu_u);
    const double mult = stable ? sys.mu_s : 1.0 / sys.mu_u;  // signed offset step
    const Eigen::Matrix2d& step = stable ? sys.base : sys.base_inv;

    Eigen::Vector2d p = xb;
    double offset = t;
    if (!stable) {  // backward sum starts at k = 1
        p = wrap2(step * p);
        offset *= mult;
    }
    double sum = 0.0;
    for (int k = 0;; ++k) {
        sum += fiber_increment(sys, p) -
               fiber_increment(sys, Eigen::Vector2d(p + offset * axis));
        const double tail = sys.lip_phi * std::abs(offset) * rate / (1.0 - rate);
        if (tail < sys.series_tol) break;
        if (k > 4096) throw Error("skew_fiber_offset: series failed to converge");
        p = wrap2(step * p);
        offset *= mult;
    }
    return stable ? sum : -sum;
}

// Graph slope d theta / d t of the strong leaf at base point xb:
//   stable:   a(x) = -sum_{k>=0} mu_s^k  grad phi(A^k x) . v_s
//   unstable: b(x) =  sum_{k>=1} mu_u^-k grad phi(A^-k x) . v_u
inline double skew_graph_slope(const SystemModel& sys, const Eigen::Vector2d& xb,
                               StrongDir dir) {
    if (sys.c1 == 0.0) return 0.0;
    const bool stable = (dir == StrongDir::Stable);
    const Eigen::Vector2d axis = stable ? sys.vs : sys.vu;
    const double rate = stable ? std::abs(sys.mu_s) : 1.0 / std::abs(sys.mu_u);
    const double mult = stable ? sys.mu_s : 1.0 / sys.mu_u;
    const Eigen::Matrix2d& step = stable ? sys.base : sys.base_inv;
    const double two_pi_c1 = 2.0 * M_PI * sys.c1;

    Eigen::Vector2d p = xb;
    double scale = 1.0;
    if (!stable) {
        p = wrap2(step * p);
        scale = mult;
    }
    double sum = 0.0;
    for (int k = 0;; ++k) {
        sum += scale * two_pi_c1 * std::cos(2.0 * M_PI * p(0)) * axis(0);
        const double tail = sys.lip_phi * std::abs(scale) * rate / (1.0 - rate);
        if (tail < sys.series_tol) break;
        if (k > 4096) throw Error("skew_graph_slope: series failed to converge");
        p = wrap2(step * p);
        scale *= mult;
    }
    return stable ? -sum : sum;
}

// Inner (arc-length) distance along a strong leaf of the skew product from
// base offset 0 to t: 16-point Gauss-Legendre on sqrt(1 + slope^2).
inline double skew_strong_arclength(const SystemModel& sys, const Eigen::Vector2d& xb,
                                    double t, StrongDir dir) {
    if (t == 0.0) return 0.0;
    if (sys.c1 == 0.0) return std::abs(t);
    const Eigen::Vector2d axis = (dir == StrongDir::Stable) ? sys.vs : sys.vu;
    const auto& table = gl16();
    const double half = t / 2.0;
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double s = half + half * table.x[i];
        const Eigen::Vector2d p = wrap2(xb + s * axis);
        const double slope = skew_graph_slope(sys, p, dir);
        sum += table.w[i] * std::sqrt(1.0 + slope * slope);
    }
    return std::abs(half) * sum;
}

}  // namespace detail

// Fiber offset sigma_s between x_b and a point y_b on the base stable line
// through x_b: the strong stable leaf through (x_b, th) passes through
// (y_b, th + sigma_s).
inline double strong_stable_fiber_offset(const SystemModel& sys, const TorusPoint& x_b,
                                         const TorusPoint& y_b) {
    if (sys.kind != SystemKind::SkewProductPH)
        throw InvalidInput("strong_stable_fiber_offset: skew-product systems only");
    if (x_b.dim() != 2 || y_b.dim() != 2)
        throw InvalidInput("strong_stable_fiber_offset: base points must be 2-dimensional");
    const Vec w = detail::minimal_rep(x_b.c, y_b.c);
    if (w.norm() >= sys.hyp.delta0)
        throw ChartDomainExceeded("strong_stable_fiber_offset: base distance exceeds delta0");
    const double t = w.dot(sys.vs);
    const double residual = (w - t * Eigen::Vector2d(sys.vs)).norm();
    if (residual > kLeafTol) {
        std::ostringstream os;
        os << "strong_stable_fiber_offset: point off the stable line by " << residual;
        throw NotOnLeaf(os.str());
    }
    return detail::skew_fiber_offset(sys, x_b.c.head<2>(), t, StrongDir::Stable);
}

inline double strong_unstable_fiber_offset(const SystemModel& sys, const TorusPoint& x_b,
                                           const TorusPoint& y_b) {
    if (sys.kind != SystemKind::SkewProductPH)
        throw InvalidInput("strong_unstable_fiber_offset: skew-product systems only");
    if (x_b.dim() != 2 || y_b.dim() != 2)
        throw InvalidInput("strong_unstable_fiber_offset: base points must be 2-dimensional");
    const Vec w = detail::minimal_rep(x_b.c, y_b.c);
    if (w.norm() >= sys.hyp.delta0)
        throw ChartDomainExceeded("strong_unstable_fiber_offset: base distance exceeds delta0");
    const double t = w.dot(sys.vu);
    const double residual = (w - t * Eigen::Vector2d(sys.vu)).norm();
    if (residual > kLeafTol) {
        std::ostringstream os;
        os << "strong_unstable_fiber_offset: point off the unstable line by " << residual;
        throw NotOnLeaf(os.str());
    }
    return detail::skew_fiber_offset(sys, x_b.c.head<2>(), t, StrongDir::Unstable);
}

// Splitting frame at x: constant for LinearPH, strong columns tilted by the
// local graph slope for skew products.
inline SplitFrame frame_at(const SystemModel& sys, const TorusPoint& x) {
    if (sys.kind == SystemKind::LinearPH) return sys.frame;
    const Eigen::Vector2d xb = x.c.head<2>();
    const double a = detail::skew_graph_slope(sys, xb, StrongDir::Stable);
    const double b = detail::skew_graph_slope(sys, xb, StrongDir::Unstable);
    SplitFrame f;
    f.basis_s = Eigen::Vector3d(sys.vs(0), sys.vs(1), a).normalized();
    f.basis_c = Eigen::Vector3d(0, 0, 1);
    f.basis_u = Eigen::Vector3d(sys.vu(0), sys.vu(1), b).normalized();
    return f;
}

// ---------------------------------------------------------------------------
// Strong-leaf charts (exp^s / exp^u)
// ---------------------------------------------------------------------------
// LinearPH leaves are affine: the chart is chart_exp against the orthonormal
// block basis and coordinates are Euclidean. Skew strong leaves are
// parametrized by the signed base offset along the eigenline; the chart
// lands on the synchronization graph.

inline TorusPoint strong_chart_point(const SystemModel& sys, const TorusPoint& x,
                                     const Vec& coords, StrongDir dir) {
    if (sys.kind == SystemKind::LinearPH) {
        const Eigen::MatrixXd& basis =
            (dir == StrongDir::Stable) ? sys.frame.basis_s : sys.frame.basis_u;
        return chart_exp(x, Displacement(basis * coords));
    }
    const double t = coords(0);
    const Eigen::Vector2d axis = (dir == StrongDir::Stable) ? sys.vs : sys.vu;
    const Eigen::Vector2d xb = x.c.head<2>();
    Vec out(3);
    out.head<2>() = xb + t * axis;
    out(2) = x.c(2) + detail::skew_fiber_offset(sys, xb, t, dir);
    return wrap(out);
}

inline Vec strong_chart_coord(const SystemModel& sys, const TorusPoint& x,
                              const TorusPoint& p, StrongDir dir) {
    if (sys.kind == SystemKind::LinearPH) {
        const Eigen::MatrixXd& basis =
            (dir == StrongDir::Stable) ? sys.frame.basis_s : sys.frame.basis_u;
        return basis.transpose() * chart_log(x, p).v;
    }
    const Eigen::Vector2d axis = (dir == StrongDir::Stable) ? sys.vs : sys.vu;
    const Vec w = detail::minimal_rep(x.c, p.c);
    Vec out(1);
    out(0) = w.head<2>().dot(axis);
    return out;
}

// Inner leaf distance from x to the point of its strong leaf at chart
// coordinate `coords`.
inline double strong_leaf_distance(const SystemModel& sys, const TorusPoint& x,
                                   const Vec& coords, StrongDir dir) {
    if (sys.kind == SystemKind::LinearPH) return coords.norm();
    return detail::skew_strong_arclength(sys, x.c.head<2>(), coords(0), dir);
}

// ---------------------------------------------------------------------------
// Center-leaf distance and the local leaf intersection
// ---------------------------------------------------------------------------

struct CentralOffset {
    double dist_c = 0;    // inner center-leaf distance
    double residual = 0;  // transversal distance from the common center leaf
};

// Non-throwing center-leaf comparison; used by the verification passes.
// The residual is the Euclidean distance from y to the central leaf of x.
inline CentralOffset central_offset(const SystemModel& sys, const TorusPoint& x,
                                    const TorusPoint& y) {
    CentralOffset out;
    if (sys.kind == SystemKind::SkewProductPH) {
        out.residual = detail::minimal_rep(x.c.head(2), y.c.head(2)).norm();
        out.dist_c = std::abs(detail::minimal_rep(x.c.tail(1), y.c.tail(1))(0));
        return out;
    }
    const Vec w = detail::minimal_rep(x.c, y.c);
    if (sys.frame.c() == 0) {
        out.residual = w.norm();
        return out;
    }
    const Vec wc = sys.frame.basis_c * (sys.frame.basis_c.transpose() * w);
    out.residual = (w - wc).norm();
    out.dist_c = wc.norm();
    return out;
}

struct WeakOffset {
    double residual = 0;  // Euclidean distance from y to the weak leaf of x
    double dist = 0;      // inner leaf distance from x to y, assuming on-leaf
};

// Position of y relative to W^cu(x) (side == StableCU) or W^cs(x)
// (side == UnstableCS). For skew products the weak leaves are flat
// cylinders, so the inner distance is the hypotenuse of the base offset and
// the fiber circle offset.
inline WeakOffset weak_leaf_offset(const SystemModel& sys, const TorusPoint& x,
                                   const TorusPoint& y, LeafPair side) {
    WeakOffset out;
    const Vec w = detail::minimal_rep(x.c, y.c);
    if (sys.kind == SystemKind::LinearPH) {
        const Eigen::MatrixXd& q = (side == LeafPair::StableCU) ? sys.ortho_cu : sys.ortho_cs;
        const Vec on = q * (q.transpose() * w);
        out.residual = (w - on).norm();
        out.dist = on.norm();
        return out;
    }
    const Eigen::Vector2d axis = (side == LeafPair::StableCU) ? sys.vu : sys.vs;
    const Eigen::Vector2d wb = w.head<2>();
    const double t = wb.dot(axis);
    out.residual = (wb - t * axis).norm();
    out.dist = std::hypot(t, w(2));
    return out;
}

// Center-leaf inner distance between points on a common central leaf.
inline double central_leaf_distance(const SystemModel& sys, const TorusPoint& x,
                                    const TorusPoint& y) {
    if (x.dim() != sys.n || y.dim() != sys.n)
        throw InvalidInput("central_leaf_distance: dimension mismatch");
    const CentralOffset off = central_offset(sys, x, y);
    if (off.residual > kLeafTol) {
        std::ostringstream os;
        os << "central_leaf_distance: points not on a common central leaf "
              "(transversal residual "
           << off.residual << ")";
        throw NotOnLeaf(os.str());
    }
    return off.dist_c;
}

struct LeafIntersection {
    TorusPoint point;        // the unique local intersection z
    double strong_dist = 0;  // dist_s(x, z) or dist_u(x, z)
    double weak_dist = 0;    // dist_cu(y, z) or dist_cs(y, z)
};

// z = W^s(x) ∩ W^cu(y) (or the u/cs mirror) for dist(x,y) < delta <= delta0.
// Both returned leaf distances are certified against L0 * delta.
inline LeafIntersection leaf_intersection(const SystemModel& sys, const TorusPoint& x,
                                          const TorusPoint& y, LeafPair side,
                                          double delta) {
    if (x.dim() != sys.n || y.dim() != sys.n)
        throw InvalidInput("leaf_intersection: dimension mismatch");
    if (!(delta > 0) || delta > sys.hyp.delta0)
        throw InvalidInput("leaf_intersection: delta must lie in (0, delta0]");
    if (toral_dist(x, y) >= delta)
        throw TooFarApart("leaf_intersection: points farther apart than delta");
    if (sys.frame_cond > kCondCap)
        throw DegenerateFrame("leaf_intersection: frame condition number exceeds cap");

    LeafIntersection out;
    if (sys.kind == SystemKind::LinearPH) {
        const Vec w = detail::minimal_rep(x.c, y.c);
        const Vec coords = sys.frame_inv * w;
        Vec strong_part;
        if (side == LeafPair::StableCU)
            strong_part = sys.frame.basis_s * coords.head(sys.frame.s());
        else
            strong_part = sys.frame.basis_u * coords.tail(sys.frame.u());
        out.point = chart_exp(x, Displacement(strong_part));
        out.strong_dist = strong_part.norm();
        out.weak_dist = (w - strong_part).norm();
    } else {
        // base intersection: (strong line of x_b) ∩ (other eigenline of y_b)
        const Vec w = detail::minimal_rep(x.c, y.c);
        const Eigen::Vector2d wb = w.head<2>();
        const bool stable_side = (side == LeafPair::StableCU);
        Eigen::Matrix2d pair;
        if (stable_side)
            pair << sys.vs, -sys.vu;
        else
            pair << sys.vu, -sys.vs;
        const Eigen::Vector2d ab = pair.inverse() * wb;
        const double alpha = ab(0);  // offset along x's strong eigenline
        const double beta = ab(1);   // offset along y's weak base line
        const StrongDir dir = stable_side ? StrongDir::Stable : StrongDir::Unstable;
        Vec coords(1);
        coords(0) = alpha;
        out.point = strong_chart_point(sys, x, coords, dir);
        out.strong_dist = strong_leaf_distance(sys, x, coords, dir);
        // the weak leaf is a flat cylinder: base offset x circle offset
        const double fiber_gap =
            std::abs(detail::minimal_rep(y.c.tail(1), out.point.c.tail(1))(0));
        out.weak_dist = std::hypot(beta, fiber_gap);
    }

    const double bound = sys.hyp.L0 * delta + 1e-9;
    if (out.strong_dist > bound || out.weak_dist > bound)
        throw Error("leaf_intersection: transversality bound L0*delta exceeded");
    return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

namespace detail {

struct EigCluster {
    std::complex<double> root;
    int multiplicity = 0;
};

inline std::vector<EigCluster> cluster_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<EigCluster> out;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        EigCluster cl{roots[i], 1};
        used[i] = true;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-9) {
                used[j] = true;
                ++cl.multiplicity;
            }
        }
        out.push_back(cl);
    }
    return out;
}

inline void finish_linear_caches(SystemModel& sys) {
    const Eigen::MatrixXd f = sys.frame.full();
    sys.frame_cond = cond_number(f);
    if (sys.frame_cond > kCondCap)
        throw NotPartiallyHyperbolic("splitting frame is numerically degenerate");
    sys.frame_inv = f.inverse();
    const int n = sys.n, s = sys.frame.s(), c = sys.frame.c();
    Eigen::MatrixXd sel_s = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sel_c = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sel_u = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < s; ++i) sel_s(i, i) = 1;
    for (int i = 0; i < c; ++i) sel_c(s + i, s + i) = 1;
    for (int i = s + c; i < n; ++i) sel_u(i, i) = 1;
    sys.proj_s = f * sel_s * sys.frame_inv;
    sys.proj_c = f * sel_c * sys.frame_inv;
    sys.proj_u = f * sel_u * sys.frame_inv;
    Eigen::MatrixXd cu(n, sys.frame.c() + sys.frame.u());
    cu << sys.frame.basis_c, sys.frame.basis_u;
    Eigen::MatrixXd cs(n, sys.frame.c() + sys.frame.s());
    cs << sys.frame.basis_s, sys.frame.basis_c;
    sys.ortho_cu = orthonormalize(cu);
    sys.ortho_cs = orthonormalize(cs);
}

// Transversality bound for skew products: the worst chart-to-leaf
// amplification of the two intersection solvers, assembled from the base
// oblique projections and the sampled graph-slope suprema.
inline void finish_skew_constants(SystemModel& sys) {
    double a_sup = 0.0, b_sup = 0.0;
    const int grid = 48;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Eigen::Vector2d p(static_cast<double>(i) / grid,
                                    static_cast<double>(j) / grid);
            a_sup = std::max(a_sup, std::abs(skew_graph_slope(sys, p, StrongDir::Stable)));
            b_sup = std::max(b_sup, std::abs(skew_graph_slope(sys, p, StrongDir::Unstable)));
        }
    a_sup *= 1.05;  // margin for grid coarseness
    b_sup *= 1.05;
    sys.slope_s_sup = a_sup;
    sys.slope_u_sup = b_sup;

    // Transversality constant: worst ratio of the intersection certificates
    // (strong arc length, weak cylinder distance) to the chart distance. In
    // coordinates u = (alpha, beta, t) with w_b = alpha v_strong +
    // beta v_weak and fiber offset t,
    //   strong^2 <= (1 + slope^2) alpha^2,
    //   weak^2   <= beta^2 + (|t| + slope |alpha|)^2,
    //   |w|^2     = alpha^2 + beta^2 + 2 (v_s . v_u) alpha beta + t^2,
    // so each factor is the largest generalized eigenvalue of the value
    // form against the constraint form.
    const double cvv = sys.vs.dot(sys.vu);
    Eigen::Matrix3d constraint;
    constraint << 1, cvv, 0, cvv, 1, 0, 0, 0, 1;
    auto factor = [&constraint](const Eigen::Matrix3d& value) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(value, constraint);
        return std::sqrt(es.eigenvalues().maxCoeff());
    };
    auto strong_form = [](double slope) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        m(0, 0) = 1.0 + slope * slope;
        return m;
    };
    auto weak_form = [](double slope) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        m(0, 0) = slope * slope;
        m(1, 1) = 1.0;
        m(2, 2) = 1.0;
        m(0, 2) = m(2, 0) = slope;
        return m;
    };
    sys.hyp.L0 = std::max({1.0 + 1e-12, factor(strong_form(a_sup)),
                           factor(weak_form(a_sup)), factor(strong_form(b_sup)),
                           factor(weak_form(b_sup))});

    // sup |Df^power| and sup |Df^-power|: exact in the fiber phase for
    // power 1 (Df depends on x only through cos(2 pi x1)), sampled orbit
    // products otherwise
    double r = 0.0, r_inv = 0.0;
    auto fold = [&](const Eigen::Matrix3d& d) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
        r = std::max(r, svd.singularValues()(0));
        r_inv = std::max(r_inv, 1.0 / svd.singularValues()(2));
    };
    if (sys.power == 1) {
        for (int i = 0; i <= 200; ++i) {
            const double kappa = -1.0 + i / 100.0;
            Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
            d.topLeftCorner<2, 2>() = sys.base;
            d(2, 0) = 2.0 * M_PI * sys.c1 * kappa;
            d(2, 2) = 1.0;
            fold(d);
        }
    } else {
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                Vec p(3);
                p << static_cast<double>(i) / grid, static_cast<double>(j) / grid, 0.0;
                fold(differential(sys, TorusPoint(p)));
            }
        r *= 1.01;
        r_inv *= 1.01;
    }
    sys.R = r;
    sys.R_inv = r_inv;
    sys.frame_cond = cond_number(sys.frame.full());
}

}  // namespace detail

// Builds a LinearPH model from a unimodular integer matrix. Eigenvalue
// moduli are classified into stable (<1), central (=1), unstable (>1); the
// rate inequalities are then validated on the restricted operators in the
// Euclidean metric, so splittings that would need an adapted metric are
// rejected as NotPartiallyHyperbolic.
inline SystemModel build_linear(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
        throw InvalidSystem("build_linear: matrix must be square");
    detail::require_integer_entries(matrix, "build_linear");
    SystemModel sys;
    sys.kind = SystemKind::LinearPH;
    sys.n = static_cast<int>(matrix.rows());
    sys.mat = matrix.array().round().matrix();
    const long long det = detail::int_det(sys.mat);
    if (det != 1 && det != -1)
        throw InvalidSystem("build_linear: |det| must be 1 (got det = " +
                            std::to_string(det) + ")");
    sys.mat_inv = detail::unimodular_inverse(sys.mat);

    const auto clusters = detail::cluster_roots(detail::char_roots(sys.mat));
    std::vector<Eigen::MatrixXd> stable_blocks, center_blocks, unstable_blocks;
    double nu = 0.0, min_unstable = std::numeric_limits<double>::infinity();
    for (const auto& cl : clusters) {
        if (cl.root.imag() < -1e-9) continue;  // handled with the conjugate
        const double mod = std::abs(cl.root);
        Eigen::MatrixXd sub = detail::cluster_subspace(sys.mat, cl.root, cl.multiplicity);
        if (std::abs(mod - 1.0) <= kCenterTol) {
            center_blocks.push_back(sub);
        } else if (mod < 1.0) {
            stable_blocks.push_back(sub);
            nu = std::max(nu, mod);
        } else {
            unstable_blocks.push_back(sub);
            min_unstable = std::min(min_unstable, mod);
        }
    }

    auto concat = [&](const std::vector<Eigen::MatrixXd>& blocks) {
        int cols = 0;
        for (const auto& b : blocks) cols += static_cast<int>(b.cols());
        Eigen::MatrixXd out(sys.n, cols);
        int at = 0;
        for (const auto& b : blocks) {
            out.middleCols(at, b.cols()) = b;
            at += static_cast<int>(b.cols());
        }
        return out;
    };
    sys.frame.basis_s = detail::orthonormalize(concat(stable_blocks));
    sys.frame.basis_c = detail::orthonormalize(concat(center_blocks));
    sys.frame.basis_u = detail::orthonormalize(concat(unstable_blocks));

    if (sys.frame.s() == 0 && sys.frame.u() == 0)
        throw NotPartiallyHyperbolic("build_linear: no expanding or contracting directions");
    if (sys.frame.s() + sys.frame.c() + sys.frame.u() != sys.n)
        throw NotPartiallyHyperbolic("build_linear: splitting does not span (Jordan structure)");

    // The stored moduli must be the exact Euclidean rates, i.e. each block
    // restriction acts normally.
    auto restriction = [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
        if (q.cols() == 0) return Eigen::MatrixXd(0, 0);
        return q.transpose() * sys.mat * q;
    };
    const Eigen::MatrixXd bs = restriction(sys.frame.basis_s);
    const Eigen::MatrixXd bc = restriction(sys.frame.basis_c);
    const Eigen::MatrixXd bu = restriction(sys.frame.basis_u);
    if (bs.size() > 0 && detail::op_norm(bs) > nu + 1e-9)
        throw NotPartiallyHyperbolic(
            "build_linear: stable rate exceeds the eigenvalue modulus in the flat metric");
    if (bc.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bc);
        const auto& sv = svd.singularValues();
        if (sv(0) > 1.0 + 1e-9 || sv(sv.size() - 1) < 1.0 - 1e-9)
            throw NotPartiallyHyperbolic(
                "build_linear: center block is not a pure rotation/identity in the flat metric");
    }
    if (bu.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bu);
        if (svd.singularValues()(bu.cols() - 1) < min_unstable - 1e-9)
            throw NotPartiallyHyperbolic(
                "build_linear: unstable rate below the eigenvalue modulus in the flat metric");
    }

    sys.hyp.nu = (sys.frame.s() > 0) ? nu : 0.0;
    sys.hyp.nu_hat = (sys.frame.u() > 0) ? 1.0 / min_unstable : 0.0;
    sys.hyp.gamma = sys.hyp.gamma_hat = 1.0;
    double lam = std::numeric_limits<double>::infinity();
    if (sys.frame.s() > 0) lam = std::min(lam, 1.0 / sys.hyp.nu);
    if (sys.frame.u() > 0) lam = std::min(lam, 1.0 / sys.hyp.nu_hat);
    sys.hyp.lambda = lam;
    if (!(sys.hyp.lambda > 1.0))
        throw NotPartiallyHyperbolic("build_linear: lambda must exceed 1");

    detail::finish_linear_caches(sys);
    sys.hyp.L0 = std::max(
        {detail::op_norm(sys.proj_s), detail::op_norm(sys.proj_c),
         detail::op_norm(sys.proj_u), 1.0 + 1e-12});
    sys.hyp.delta0 = kDelta0;
    sys.hyp.m = 1;
    sys.hyp.l = detail::minimal_l(sys.hyp.lambda, sys.hyp.L0);
    sys.R = detail::op_norm(sys.mat);
    sys.R_inv = detail::op_norm(sys.mat_inv);
    sys.series_tol = kSeriesTolDefault;
    return sys;
}

// Builds a skew-product model (A x mod 1, th + c0 + c1 sin(2 pi x1) mod 1)
// over a 2x2 integer Anosov base.
inline SystemModel build_skew_product(const Eigen::MatrixXd& A, double c0, double c1,
                                      double series_tol = kSeriesTolDefault) {
    if (A.rows() != 2 || A.cols() != 2)
        throw InvalidSystem("build_skew_product: base must be 2x2");
    detail::require_integer_entries(A, "build_skew_product");
    if (!std::isfinite(c0) || !std::isfinite(c1))
        throw InvalidInput("build_skew_product: fiber parameters must be finite");
    if (!(series_tol > 0))
        throw InvalidInput("build_skew_product: series_tol must be positive");

    SystemModel sys;
    sys.kind = SystemKind::SkewProductPH;
    sys.n = 3;
    sys.base = A.array().round().matrix();
    const long long det = detail::int_det(sys.base);
    if (det != 1 && det != -1)
        throw InvalidSystem("build_skew_product: |det A| must be 1");
    sys.base_inv = detail::unimodular_inverse(sys.base);

    const long long tr = std::llround(sys.base.trace());
    const long long disc = tr * tr - 4 * det;
    if (disc <= 0)
        throw InvalidSystem("build_skew_product: base is not Anosov (no real splitting)");
    const double sq = std::sqrt(static_cast<double>(disc));
    double r1 = (tr + sq) / 2.0, r2 = (tr - sq) / 2.0;
    if (std::abs(std::abs(r1) - 1.0) <= kCenterTol ||
        std::abs(std::abs(r2) - 1.0) <= kCenterTol)
        throw InvalidSystem("build_skew_product: base is not Anosov (eigenvalue on the unit circle)");
    if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
    sys.mu_u = r1;
    sys.mu_s = r2;

    auto eigvec = [&](double r) {
        // kernel of (A - r I), closed form
        const Eigen::Vector2d cand1(sys.base(0, 1), r - sys.base(0, 0));
        const Eigen::Vector2d cand2(r - sys.base(1, 1), sys.base(1, 0));
        Eigen::Vector2d v = (cand1.norm() >= cand2.norm()) ? cand1 : cand2;
        v.normalize();
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        return v;
    };
    sys.vs = eigvec(sys.mu_s);
    sys.vu = eigvec(sys.mu_u);
    Eigen::Matrix2d pair;
    pair << sys.vs, sys.vu;
    if (std::abs(pair.determinant()) < 1e-12)
        throw InvalidSystem("build_skew_product: eigenvectors do not span the base");

    sys.c0 = c0;
    sys.c1 = c1;
    sys.lip_phi = 2.0 * M_PI * std::abs(c1);
    sys.series_tol = series_tol;
    sys.power = 1;

    sys.frame.basis_s = Eigen::Vector3d(sys.vs(0), sys.vs(1), 0);
    sys.frame.basis_c = Eigen::Vector3d(0, 0, 1);
    sys.frame.basis_u = Eigen::Vector3d(sys.vu(0), sys.vu(1), 0);

    sys.hyp.nu = std::abs(sys.mu_s);
    sys.hyp.nu_hat = 1.0 / std::abs(sys.mu_u);
    sys.hyp.gamma = sys.hyp.gamma_hat = 1.0;
    sys.hyp.lambda = std::min(1.0 / sys.hyp.nu, 1.0 / sys.hyp.nu_hat);
    sys.hyp.delta0 = kDelta0;
    sys.hyp.m = 1;

    detail::finish_skew_constants(sys);
    sys.hyp.l = detail::minimal_l(sys.hyp.lambda, sys.hyp.L0);
    return sys;
}

// f^p with the same foliations and p-th power rates.
inline SystemModel system_power(const SystemModel& sys, int p) {
    if (p < 1) throw InvalidInput("system_power: power must be >= 1");
    if (p == 1) return sys;
    SystemModel out = sys;
    out.power = sys.power * p;
    out.hyp.nu = std::pow(sys.hyp.nu, p);
    out.hyp.nu_hat = std::pow(sys.hyp.nu_hat, p);
    out.hyp.lambda = std::pow(sys.hyp.lambda, p);
    if (sys.kind == SystemKind::LinearPH) {
        Eigen::MatrixXd acc = sys.mat;
        for (int i = 1; i < p; ++i) {
            acc = acc * sys.mat;
            detail::require_integer_entries(acc, "system_power");
        }
        out.mat = acc;
        out.mat_inv = detail::unimodular_inverse(acc);
        out.R = detail::op_norm(acc);
        out.R_inv = detail::op_norm(out.mat_inv);
    } else {
        detail::finish_skew_constants(out);
    }
    out.hyp.l = detail::minimal_l(out.hyp.lambda, out.hyp.L0);
    return out;
}

inline std::string kind_name(const SystemModel& sys) {
    return sys.kind == SystemKind::LinearPH ? "linear" : "skew_product";
}

}  // namespace censhadow
