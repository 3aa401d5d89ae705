#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "freundgeo/io.hpp"
#include "freundgeo/submanifolds.hpp"

// The common-rates surface realized as the graph (u, v, -log(uv)) in R^3
// with constant transversal field (0, 0, 1). The diagonal u == v carries the
// zero-covariance points; a Euclidean tube around it gives a computable
// notion of "near independence".

namespace freundgeo {

inline constexpr std::array<double, 3> kTransversalField = {0.0, 0.0, 1.0};

/// Height of the graph; the single source of truth for the w coordinate.
inline double immersion_height(double u, double v) { return -std::log(u * v); }

struct ImmersedPoint {
    double u{};  // alpha1
    double v{};  // beta1
    double w{};  // -log(u v)
};

inline ImmersedPoint immerse(const F2Point& p) {
    validate(p);
    return {p.alpha1, p.beta1, immersion_height(p.alpha1, p.beta1)};
}

/// n samples of t -> (t, t, -log(t^2)) over [t_min, t_max].
inline std::vector<ImmersedPoint> independence_curve(double t_min, double t_max, int n) {
    if (!(t_min > 0.0 && t_min < t_max) || n < 2)
        throw std::domain_error("independence_curve: need 0 < t_min < t_max and n >= 2");
    std::vector<ImmersedPoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = t_min + (t_max - t_min) * i / (n - 1);
        out.push_back({t, t, immersion_height(t, t)});
    }
    return out;
}

struct CurveDistance {
    double distance{};
    ImmersedPoint foot{};
};

namespace detail {

inline double curve_dist_sq(const ImmersedPoint& q, double t) {
    const double dw = immersion_height(t, t) - q.w;
    return (t - q.u) * (t - q.u) + (t - q.v) * (t - q.v) + dw * dw;
}

/// Brent minimization on [a, b]; golden-section with parabolic steps.
template <class Fn>
double brent_minimize(Fn&& f, double a, double b, double tol, int max_iter, const char* what) {
    const double gold = 0.3819660112501051;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) return x;
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double pn = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) pn = -pn;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(pn) < std::fabs(0.5 * q * e_old) && pn > q * (a - x) &&
                pn < q * (b - x)) {
                d = pn / q;
                const double u2 = x + d;
                if (u2 - a < tol2 || b - u2 < tol2) d = (m > x) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        const double u2 = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0) ? tol1 : -tol1);
        const double fu = f(u2);
        if (fu <= fx) {
            if (u2 < x) b = x; else a = x;
            v = w; fv = fw; w = x; fw = fx; x = u2; fx = fu;
        } else {
            if (u2 < x) a = u2; else b = u2;
            if (fu <= fw || w == x) {
                v = w; fv = fw; w = u2; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u2; fv = fu;
            }
        }
    }
    throw std::runtime_error(std::string(what) + ": minimizer did not converge in bracket [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
}

}  // namespace detail

/// Euclidean distance from a surface point to the diagonal curve, with the
/// nearest curve point. Coarse scan over a generous log bracket picks the
/// basin, Brent polishes it.
inline CurveDistance distance_to_independence(const ImmersedPoint& q) {
    if (!(q.u > kPositivityFloor && q.v > kPositivityFloor))
        throw std::domain_error("distance_to_independence: point off the chart");
    if (std::fabs(q.w - immersion_height(q.u, q.v)) >
        1e-9 * std::fmax(1.0, std::fabs(q.w)))
        throw std::domain_error("distance_to_independence: point not on the immersed surface");

    const double t_ref = std::fmax(std::fmax(q.u, q.v), std::exp(-0.5 * q.w));
    const double t_lo = std::fmin(std::fmin(q.u, q.v), std::exp(-0.5 * q.w)) / 8.0;
    const double t_hi = t_ref * 8.0;
    const int scan = 256;
    int best = 0;
    double best_val = detail::curve_dist_sq(q, t_lo);
    const double ratio = std::pow(t_hi / t_lo, 1.0 / (scan - 1));
    for (int i = 1; i < scan; ++i) {
        const double t = t_lo * std::pow(ratio, i);
        const double val = detail::curve_dist_sq(q, t);
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    const double a = t_lo * std::pow(ratio, std::max(0, best - 1));
    const double b = t_lo * std::pow(ratio, std::min(scan - 1, best + 1));
    const double t_star = detail::brent_minimize([&](double t) { return detail::curve_dist_sq(q, t); },
                                                 a, b, 1e-12, 200, "distance_to_independence");
    CurveDistance out;
    out.foot = {t_star, t_star, immersion_height(t_star, t_star)};
    out.distance = std::sqrt(detail::curve_dist_sq(q, t_star));
    return out;
}

struct ImmersionMesh {
    std::vector<ImmersedPoint> vertices;
    std::vector<std::array<int, 3>> triangles;  // 0-based vertex indices
    std::vector<bool> in_tube;                  // per vertex
    std::vector<ImmersedPoint> curve;
    double tube_radius{};
};

struct MeshRange {
    double lo{};
    double hi{};
};

/// Regular grid graph over [u_range] x [v_range]; resolution counts vertices
/// per side. The diagonal polyline is embedded where the ranges overlap.
inline ImmersionMesh build_mesh(MeshRange u_range, MeshRange v_range, int resolution,
                                double tube_radius) {
    if (!(u_range.lo > 0.0 && u_range.lo < u_range.hi) ||
        !(v_range.lo > 0.0 && v_range.lo < v_range.hi))
        throw std::domain_error("build_mesh: ranges must be positive and increasing");
    if (resolution < 2) throw std::domain_error("build_mesh: resolution must be >= 2");
    if (!(tube_radius > 0.0)) throw std::domain_error("build_mesh: tube radius must be positive");

    ImmersionMesh mesh;
    mesh.tube_radius = tube_radius;
    mesh.vertices.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        const double u = u_range.lo + (u_range.hi - u_range.lo) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double v = v_range.lo + (v_range.hi - v_range.lo) * j / (resolution - 1);
            mesh.vertices.push_back({u, v, immersion_height(u, v)});
        }
    }
    for (int i = 0; i + 1 < resolution; ++i) {
        for (int j = 0; j + 1 < resolution; ++j) {
            const int a = i * resolution + j;
            const int b = (i + 1) * resolution + j;
            const int c = i * resolution + (j + 1);
            const int d = (i + 1) * resolution + (j + 1);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({b, d, c});
        }
    }
    mesh.in_tube.reserve(mesh.vertices.size());
    for (const auto& vert : mesh.vertices) {
        mesh.in_tube.push_back(distance_to_independence(vert).distance < tube_radius);
    }
    const double c_lo = std::fmax(u_range.lo, v_range.lo);
    const double c_hi = std::fmin(u_range.hi, v_range.hi);
    if (c_lo < c_hi) mesh.curve = independence_curve(c_lo, c_hi, 2 * resolution);
    return mesh;
}

/// Wavefront export: surface faces under `o surface`, the diagonal as a
/// polyline object. 17 significant digits, LF line ends.
inline void export_obj(const ImmersionMesh& mesh, std::ostream& os) {
    for (const auto& v : mesh.vertices)
        os << "v " << fmt17(v.u) << " " << fmt17(v.v) << " " << fmt17(v.w) << "\n";
    os << "o surface\n";
    for (const auto& t : mesh.triangles)
        os << "f " << (t[0] + 1) << " " << (t[1] + 1) << " " << (t[2] + 1) << "\n";
    if (!mesh.curve.empty()) {
        const int base = static_cast<int>(mesh.vertices.size());
        for (const auto& c : mesh.curve)
            os << "v " << fmt17(c.u) << " " << fmt17(c.v) << " " << fmt17(c.w) << "\n";
        os << "o independence_curve\n";
        os << "l";
        for (std::size_t i = 0; i < mesh.curve.size(); ++i)
            os << " " << (base + static_cast<int>(i) + 1);
        os << "\n";
    }
}

inline void export_csv(const ImmersionMesh& mesh, std::ostream& os) {
    os << "u,v,w,in_tube\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto& v = mesh.vertices[i];
        os << fmt17(v.u) << "," << fmt17(v.v) << "," << fmt17(v.w) << ","
           << (mesh.in_tube[i] ? 1 : 0) << "\n";
    }
}

}  // namespace freundgeo
