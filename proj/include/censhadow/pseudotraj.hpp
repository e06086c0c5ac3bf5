/*
 * pseudotraj.hpp — d-pseudotrajectories: generation, validation, central
 * verification, and CSV serialization.
 *
 * A d-pseudotrajectory is a finite sequence x_0..x_N with one-step errors
 * dist(f(x_k), x_{k+1}) <= d. A central pseudotrajectory additionally keeps
 * every defect inside the central leaf: f(y_k) lies on W^c(y_{k+1}) up to
 * the transversal tolerance, with the central jump below the given epsilon.
 *
 * CSV format: header `k,c1,...,cn`, one row per index, coordinates printed
 * with 17 significant digits (round-trip exact for 64-bit doubles).
 */

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "censhadow/errors.hpp"
#include "censhadow/systems.hpp"
#include "censhadow/torus.hpp"

namespace censhadow {

struct Pseudotrajectory {
    std::vector<TorusPoint> points;  // indices k = 0..N
    double d = 0;                    // claimed one-step error bound

    int size() const { return static_cast<int>(points.size()); }
    int steps() const { return size() - 1; }
    const TorusPoint& operator[](int k) const { return points[static_cast<size_t>(k)]; }
};

struct CentralJumpRecord {
    int k = 0;
    double central_dist = 0;
    double transversal_residual = 0;
};

struct ValidationReport {
    double max_error = 0;
    int worst_index = -1;
    bool pass = true;
};

struct CentralVerification {
    std::vector<CentralJumpRecord> jumps;
    double max_central = 0;
    double max_residual = 0;
    bool pass = true;
};

namespace detail {

// Uniform draw from the closed unit n-ball by rejection from [-1,1]^n; the
// raw engine stream keeps the pattern bit-reproducible across platforms.
inline Vec unit_ball_sample(std::mt19937_64& rng, int n) {
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    while (true) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = 2.0 * u01() - 1.0;
        if (v.squaredNorm() <= 1.0) return v;
    }
}

}  // namespace detail

// x_{k+1} = chart_exp(f(x_k), eta_k) with eta_k uniform in the radius-d
// ball. The unit-ball pattern depends only on the seed, so rescaling d
// rescales the noise pattern exactly.
inline Pseudotrajectory generate_noisy(const SystemModel& sys, const TorusPoint& x0,
                                       int N, double d, std::uint64_t seed) {
    if (x0.dim() != sys.n) throw InvalidInput("generate_noisy: dimension mismatch");
    if (N < 1) throw InvalidInput("generate_noisy: N must be positive");
    if (!(d >= 0) || d >= sys.hyp.delta0)
        throw InvalidInput("generate_noisy: d must lie in [0, delta0)");
    std::mt19937_64 rng(seed);
    Pseudotrajectory traj;
    traj.d = d;
    traj.points.reserve(static_cast<size_t>(N) + 1);
    traj.points.push_back(x0);
    const double scale = d * (1.0 - 1e-12);  // keep |eta| < d against rounding
    for (int k = 0; k < N; ++k) {
        const Vec eta = scale * detail::unit_ball_sample(rng, sys.n);
        traj.points.push_back(chart_exp(apply(sys, traj.points.back()), Displacement(eta)));
    }
    return traj;
}

// x_{k+1} = f(x_k) rounded to the nearest point of the g-spaced lattice;
// the claimed bound is the half-diagonal g sqrt(n)/2.
inline Pseudotrajectory generate_rounded(const SystemModel& sys, const TorusPoint& x0,
                                         int N, double g) {
    if (x0.dim() != sys.n) throw InvalidInput("generate_rounded: dimension mismatch");
    if (N < 1) throw InvalidInput("generate_rounded: N must be positive");
    const double root_n = std::sqrt(static_cast<double>(sys.n));
    if (!(g > 0) || g >= sys.hyp.delta0 / root_n)
        throw InvalidInput("generate_rounded: grid too coarse (need g < delta0/sqrt(n))");
    Pseudotrajectory traj;
    traj.d = g * root_n / 2.0;
    traj.points.reserve(static_cast<size_t>(N) + 1);
    traj.points.push_back(x0);
    for (int k = 0; k < N; ++k) {
        Vec next = apply(sys, traj.points.back()).c;
        for (Eigen::Index i = 0; i < next.size(); ++i)
            next[i] = std::round(next[i] / g) * g;
        traj.points.push_back(wrap(next));
    }
    return traj;
}

// Re-measures every one-step error against the claimed d.
inline ValidationReport validate(const SystemModel& sys, const Pseudotrajectory& traj) {
    ValidationReport rep;
    for (int k = 0; k + 1 < traj.size(); ++k) {
        const double err = toral_dist(apply(sys, traj[k]), traj[k + 1]);
        if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_index = k;
        }
    }
    rep.pass = rep.max_error <= traj.d;
    return rep;
}

// Checks the central-pseudotrajectory property: each f(y_k) must lie on the
// central leaf of y_{k+1} (residual below the leaf tolerance) with central
// jump at most eps.
inline CentralVerification verify_central(const SystemModel& sys,
                                          const Pseudotrajectory& traj, double eps) {
    CentralVerification out;
    out.jumps.reserve(static_cast<size_t>(std::max(traj.size() - 1, 0)));
    for (int k = 0; k + 1 < traj.size(); ++k) {
        const CentralOffset off = central_offset(sys, apply(sys, traj[k]), traj[k + 1]);
        out.jumps.push_back({k, off.dist_c, off.residual});
        out.max_central = std::max(out.max_central, off.dist_c);
        out.max_residual = std::max(out.max_residual, off.residual);
    }
    out.pass = out.max_residual <= kLeafTol && out.max_central <= eps;
    return out;
}

// sup_k dist(x_k, y_k) over two equal-length sequences.
inline double shadowing_distance(const Pseudotrajectory& a, const Pseudotrajectory& b) {
    if (a.size() != b.size())
        throw InvalidInput("shadowing_distance: length mismatch");
    double m = 0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, toral_dist(a[k], b[k]));
    return m;
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& os, const Pseudotrajectory& traj) {
    if (traj.size() == 0) throw InvalidInput("write_csv: empty trajectory");
    const int n = traj[0].dim();
    os << "k";
    for (int i = 1; i <= n; ++i) os << ",c" << i;
    os << "\n";
    char buf[40];
    for (int k = 0; k < traj.size(); ++k) {
        os << k;
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", traj[k].c[i]);
            os << ',' << buf;
        }
        os << "\n";
    }
}

inline void write_csv(const std::string& path, const Pseudotrajectory& traj) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("write_csv: cannot open " + path);
    write_csv(f, traj);
}

inline Pseudotrajectory read_csv(std::istream& is, double d = 0.0) {
    Pseudotrajectory traj;
    traj.d = d;
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("read_csv: missing header");
    int n = 0;
    for (char c : line)
        if (c == ',') ++n;
    if (n < 1 || line.rfind("k,c1", 0) != 0)
        throw InvalidInput("read_csv: malformed header (expected k,c1,...,cn)");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) throw InvalidInput("read_csv: malformed row");
        Vec v(n);
        for (int i = 0; i < n; ++i) {
            if (!std::getline(row, cell, ',')) throw InvalidInput("read_csv: short row");
            char* end = nullptr;
            v[i] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw InvalidInput("read_csv: bad number: " + cell);
        }
        traj.points.push_back(TorusPoint(v));
    }
    if (traj.points.empty()) throw InvalidInput("read_csv: no rows");
    return traj;
}

inline Pseudotrajectory read_csv_file(const std::string& path, double d = 0.0) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("read_csv: cannot open " + path);
    return read_csv(f, d);
}

}  // namespace censhadow
