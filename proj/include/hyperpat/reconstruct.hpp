// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <vector>

namespace hyperpat {

using Pt = Eigen::Vector3d;
using Motion = Eigen::Matrix3d;

// Points of the Euclidean plane as (x, y, 1); points of the hyperbolic plane
// on the hyperboloid (x, y, t) of R^{2,1}. Motions act linearly in both.
struct PlaneModel {
    bool hyperbolic = false;

    double mdot(const Pt& a, const Pt& b) const { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

    Pt point(double x, double y) const {
        if (!hyperbolic) return {x, y, 1.0};
        double s = 1.0 - x * x - y * y;
        if (!(s > 0.0)) throw Error("OutsideDisk", "point is not inside the Klein disk", {{"x", x}, {"y", y}});
        return Pt(x, y, 1.0) / std::sqrt(s);
    }

    // Plane coordinates: Euclidean (x, y); Klein disk for hyperbolic.
    std::array<double, 2> xy(const Pt& p) const {
        if (!hyperbolic) return {p[0], p[1]};
        return {p[0] / p[2], p[1] / p[2]};
    }

    double dist(const Pt& a, const Pt& b) const {
        if (!hyperbolic) return std::hypot(a[0] - b[0], a[1] - b[1]);
        return std::acosh(std::max(1.0, -mdot(a, b)));
    }

    Pt along(double d) const { return hyperbolic ? Pt(std::sinh(d), 0.0, std::cosh(d)) : Pt(d, 0.0, 1.0); }

    Pt reflect(const Pt& p) const { return {p[0], -p[1], p[2]}; }

    // Oriented frame at a pointing towards b.
    Motion frame(const Pt& a, const Pt& b) const {
        Motion F;
        if (!hyperbolic) {
            Eigen::Vector2d t(b[0] - a[0], b[1] - a[1]);
            t.normalize();
            F.col(0) = Pt(t[0], t[1], 0.0);
            F.col(1) = Pt(-t[1], t[0], 0.0);
            F.col(2) = a;
            return F;
        }
        Pt t = b + mdot(a, b) * a;
        t /= std::sqrt(mdot(t, t));
        Pt c = a.cross(t);
        Pt nu(c[0], c[1], -c[2]);
        nu /= std::sqrt(mdot(nu, nu));
        F.col(0) = t;
        F.col(1) = nu;
        F.col(2) = a;
        if (F.determinant() < 0.0) F.col(1) = -nu;
        return F;
    }

    Motion inverse(const Motion& F) const {
        if (!hyperbolic) return F.inverse();
        Motion J = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
        return J * F.transpose() * J;
    }

    // Orientation-preserving motion taking (a, b) to (c, d); the distances
    // are assumed equal.
    Motion motion(const Pt& a, const Pt& b, const Pt& c, const Pt& d) const {
        return frame(c, d) * inverse(frame(a, b));
    }

    Pt apply(const Motion& M, const Pt& p) const {
        Pt q = M * p;
        if (!hyperbolic) q[2] = 1.0;
        return q;
    }

    // Interior angle at `at` from the direction of `next` counterclockwise to
    // the direction of `prev`.
    double corner_angle(const Pt& prev, const Pt& at, const Pt& next) const {
        Pt u, w;
        if (!hyperbolic) {
            u = Pt(next[0] - at[0], next[1] - at[1], 0.0);
            w = Pt(prev[0] - at[0], prev[1] - at[1], 0.0);
        } else {
            u = next + mdot(at, next) * at;
            w = prev + mdot(at, prev) * at;
        }
        Motion D;
        D << u, w, at;
        double nu = std::sqrt(hyperbolic ? mdot(u, u) : u.squaredNorm());
        double nw = std::sqrt(hyperbolic ? mdot(w, w) : w.squaredNorm());
        double dot = hyperbolic ? mdot(u, w) : u.dot(w);
        double a = std::atan2(D.determinant() / (nu * nw), dot / (nu * nw));
        return a < 0.0 ? a + 2.0 * kPi : a;
    }

    bool counterclockwise(const Pt& a, const Pt& b, const Pt& c) const {
        auto A = xy(a), B = xy(b), C = xy(c);
        return (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]) > 0.0;
    }

    // Cosine of the angle between the radii at an intersection point.
    double intersection_cos(const Pt& c1, double r1, const Pt& c2, double r2) const {
        double d = dist(c1, c2);
        if (!hyperbolic) return (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
        return (std::cosh(r1) * std::cosh(r2) - std::cosh(d)) / (std::sinh(r1) * std::sinh(r2));
    }

    double intersection_angle(const Pt& c1, double r1, const Pt& c2, double r2) const {
        return std::acos(std::clamp(intersection_cos(c1, r1, c2, r2), -1.0, 1.0));
    }

    std::vector<Pt> circle_intersections(const Pt& c1, double r1, const Pt& c2, double r2) const {
        std::vector<Pt> out;
        if (!hyperbolic) {
            double d = dist(c1, c2);
            if (d == 0.0) return out;
            double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
            double h2 = r1 * r1 - a * a;
            if (h2 < 0.0) return out;
            double h = std::sqrt(h2);
            double ux = (c2[0] - c1[0]) / d, uy = (c2[1] - c1[1]) / d;
            double mx = c1[0] + a * ux, my = c1[1] + a * uy;
            out.push_back({mx - h * uy, my + h * ux, 1.0});
            out.push_back({mx + h * uy, my - h * ux, 1.0});
            return out;
        }
        double g = mdot(c1, c2);
        Eigen::Matrix2d G;
        G << -1.0, g, g, -1.0;
        Eigen::Vector2d rhs(-std::cosh(r1), -std::cosh(r2));
        Eigen::Vector2d ab = G.fullPivLu().solve(rhs);
        Pt p0 = ab[0] * c1 + ab[1] * c2;
        Pt c = c1.cross(c2);
        Pt n(c[0], c[1], -c[2]);
        double nn = mdot(n, n);
        if (!(nn > 0.0)) return out;
        n /= std::sqrt(nn);
        double gam2 = -1.0 - mdot(p0, p0);
        if (gam2 < 0.0) return out;
        double gam = std::sqrt(gam2);
        out.push_back(p0 + gam * n);
        out.push_back(p0 - gam * n);
        return out;
    }

    // Distance from p to the line through a and b.
    double line_distance(const Pt& p, const Pt& a, const Pt& b) const {
        if (!hyperbolic) {
            double bx = b[0] - a[0], by = b[1] - a[1];
            return std::abs(bx * (p[1] - a[1]) - by * (p[0] - a[0])) / std::hypot(bx, by);
        }
        Pt c = a.cross(b);
        Pt n(c[0], c[1], -c[2]);
        n /= std::sqrt(mdot(n, n));
        return std::asinh(std::abs(mdot(p, n)));
    }

    double polygon_area(const std::vector<Pt>& pts) const {
        const int n = static_cast<int>(pts.size());
        if (!hyperbolic) {
            double a = 0.0;
            for (int i = 0; i < n; ++i) {
                const Pt& p = pts[i];
                const Pt& q = pts[(i + 1) % n];
                a += p[0] * q[1] - q[0] * p[1];
            }
            return 0.5 * a;
        }
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += corner_angle(pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        return (n - 2) * kPi - s;
    }

    // Point on the circle of radius r about c at parameter phi.
    Pt circle_point(const Pt& c, double r, double phi) const {
        if (!hyperbolic) return {c[0] + r * std::cos(phi), c[1] + r * std::sin(phi), 1.0};
        Motion F = frame(c, Pt(c[0] + 1.0, c[1], std::sqrt(1.0 + (c[0] + 1.0) * (c[0] + 1.0) + c[1] * c[1])));
        return F * Pt(std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), std::cosh(r));
    }
};

struct PlaneCircle {
    Pt center = Pt(0.0, 0.0, 1.0);
    double radius = 0.0;
};

struct Chart {
    int vertex = 0;
    std::vector<int> faces;
    std::vector<Pt> corners;            // developed positions
    std::vector<double> corner_radius;  // dual radius at each corner
    std::vector<double> corner_angle;   // interior polygon angle
    PlaneCircle principal;
    Motion placement = Motion::Identity();  // pyramid frame to developed position
    int parent = -1;                        // spanning tree parent chart
};

// Gluing of the two charts at an edge; `transition` maps developed
// coordinates of chart b to those of chart a along this edge.
struct EdgeGluing {
    int edge = 0;
    int chart_a = 0, side_a = 0;
    int chart_b = 0, side_b = 0;
    Motion transition = Motion::Identity();
    bool tree = false;
};

struct Pattern {
    Geometry geometry = Geometry::euclidean;
    PlaneModel model;
    double scale = 1.0;
    int euler_characteristic = 0;
    std::vector<Chart> charts;
    std::vector<EdgeGluing> gluings;  // per edge of the complex
    std::vector<PlaneCircle> dual;    // per face, in the first chart containing it
    std::vector<int> dual_chart;
    std::vector<bool> dual_ideal;
    std::vector<double> cone_angle;   // per face
    std::vector<std::vector<int>> face_edges;
    Json residuals = Json::object();
};

namespace detail {

using Vec4 = hyperpat::Vec4;

inline Mat4 minkowski_inverse(const Mat4& F) {
    Mat4 J = Eigen::Vector4d(1.0, 1.0, 1.0, -1.0).asDiagonal();
    return J * F.transpose() * J;
}

// Completes f3, f0 to an oriented Minkowski-orthonormal frame.
inline Mat4 complete_frame(const Vec4& f3, const Vec4& f0) {
    std::vector<Vec4> basis = {f3, f0};
    std::vector<Vec4> extra;
    for (int i = 0; i < 4 && extra.size() < 2; ++i) {
        Vec4 w = Vec4::Zero();
        w[i] = 1.0;
        for (const auto& b : basis) w -= mdot(w, b) / mdot(b, b) * b;
        for (const auto& b : extra) w -= mdot(w, b) * b;
        double n = mdot(w, w);
        if (n > 1e-6) extra.push_back(w / std::sqrt(n));
    }
    Mat4 F;
    F.col(0) = extra[0];
    F.col(1) = extra[1];
    F.col(2) = f3;
    F.col(3) = f0;
    if (F.determinant() < 0.0) F.col(1) = -F.col(1);
    return F;
}

struct TetPlacement {
    std::array<Pt, 4> pos;  // indices 1..3
    std::array<double, 4> radius{};
    PlaneCircle principal;
};

// Euclidean: upper half-space with the central vertex at infinity and its
// horosphere at height one. Hyperbolic: projection onto the plane dual to the
// central vertex, in the hyperboloid model of that plane.
inline TetPlacement place_tet(const Tet& t, double apex_shift, const PlaneModel& pm) {
    TetPlacement out;
    Mat4 L;
    if (!pm.hyperbolic) {
        Vec4 u0 = t.vertices[0] * std::exp(apex_shift);
        Vec4 best;
        double bd = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int s = -1; s <= 1; s += 2) {
                Vec4 c = Vec4::Zero();
                c[i] = s;
                c[3] = 1.0;
                double p = std::abs(mdot(u0, c));
                if (p > bd) {
                    bd = p;
                    best = c;
                }
            }
        Vec4 q = best * (-2.0 / mdot(u0, best));
        L = minkowski_inverse(complete_frame((u0 - q) / 2.0, (u0 + q) / 2.0));
    } else {
        Vec4 f3 = t.vertices[0];
        Vec4 w(0.0, 0.0, 0.0, 1.0);
        w -= mdot(w, f3) * f3;
        w /= std::sqrt(-mdot(w, w));
        if (w[3] < 0.0) w = -w;
        L = minkowski_inverse(complete_frame(f3, w));
    }
    auto circle_of = [&](const Vec4& m) {
        PlaneCircle c;
        if (!pm.hyperbolic) {
            double k = 0.5 * (m[2] - m[3]);
            c.center = Pt(-m[0] / (2.0 * k), -m[1] / (2.0 * k), 1.0);
            c.radius = 1.0 / std::abs(m[2] - m[3]);
        } else {
            double s = std::sqrt(m[2] * m[2] - 1.0);
            c.center = Pt(m[0], m[1], m[3]) / s;
            if (c.center[2] < 0.0) c.center = -c.center;
            c.radius = std::acosh(std::abs(m[2]) / s);
        }
        return c;
    };
    for (int i = 1; i < 4; ++i) {
        Vec4 m = L * t.vertices[i];
        if (t.ideal(i)) {
            if (!pm.hyperbolic) {
                out.pos[i] = Pt(m[0] / (m[3] - m[2]), m[1] / (m[3] - m[2]), 1.0);
            } else {
                Pt c = Pt(m[0], m[1], m[3]) / std::abs(m[2]);
                out.pos[i] = c[2] < 0.0 ? Pt(-c) : c;
            }
            out.radius[i] = 0.0;
        } else {
            PlaneCircle c = circle_of(m);
            out.pos[i] = c.center;
            out.radius[i] = c.radius;
        }
    }
    out.principal = circle_of(L * t.normals[0]);
    if (!pm.counterclockwise(out.pos[1], out.pos[2], out.pos[3])) {
        for (int i = 1; i < 4; ++i) out.pos[i] = pm.reflect(out.pos[i]);
        out.principal.center = pm.reflect(out.principal.center);
    }
    return out;
}

}  // namespace detail

// Develops the glued cone complex into charts, one per vertex of the complex,
// laid out along a breadth-first spanning tree from chart 0.
inline Pattern develop(const CellComplex& c, const TetComplex& tc, const Solution& sol,
                       double max_length_residual = 1e-6) {
    if (sol.length_residual > max_length_residual)
        throw Error("GluingResidualTooLarge", "edge lengths do not agree across tetrahedra",
                    {{"residual", sol.length_residual}, {"limit", max_length_residual}});
    Pattern p;
    p.geometry = tc.geometry;
    p.model.hyperbolic = tc.geometry == Geometry::hyperbolic;
    p.euler_characteristic = c.euler_characteristic();
    const PlaneModel& pm = p.model;
    const int T = static_cast<int>(tc.tets.size());
    std::vector<detail::TetPlacement> tp(T);
    for (int t = 0; t < T; ++t) {
        double shift = sol.apex_shift.empty() ? 0.0 : sol.apex_shift[t];
        tp[t] = detail::place_tet(sol.tets[t].tet, shift, pm);
    }

    double consistency = 0.0;
    const int P = static_cast<int>(tc.pyramids.size());
    std::vector<Chart> local(P);
    for (int v = 0; v < P; ++v) {
        const Pyramid& py = tc.pyramids[v];
        const int d = static_cast<int>(py.faces.size());
        Chart ch;
        ch.vertex = py.vertex;
        ch.faces = py.faces;
        ch.corners.assign(d, Pt::Zero());
        ch.corner_radius.assign(d, 0.0);
        std::vector<int> seen(d, 0);
        double rsum = 0.0;
        Pt csum = Pt::Zero();
        for (std::size_t j = 0; j < py.tets.size(); ++j) {
            int t = py.tets[j];
            const auto& cell = tc.tets[t];
            Motion M = Motion::Identity();
            if (j > 0) {
                int a = cell.corner[1], b = cell.corner[2];
                M = pm.motion(tp[t].pos[1], tp[t].pos[2], ch.corners[a], ch.corners[b]);
            }
            for (int i = 1; i < 4; ++i) {
                int k = cell.corner[i];
                Pt q = pm.apply(M, tp[t].pos[i]);
                if (seen[k]) {
                    consistency = std::max(consistency, pm.dist(q, ch.corners[k]));
                    consistency = std::max(consistency, std::abs(tp[t].radius[i] - ch.corner_radius[k]));
                } else {
                    ch.corners[k] = q;
                    ch.corner_radius[k] = tp[t].radius[i];
                    seen[k] = 1;
                }
            }
            Pt pc = pm.apply(M, tp[t].principal.center);
            if (j > 0) {
                consistency = std::max(consistency, pm.dist(pc, ch.principal.center));
                consistency = std::max(consistency, std::abs(tp[t].principal.radius - ch.principal.radius));
            } else {
                ch.principal = {pc, tp[t].principal.radius};
            }
            csum += pc;
            rsum += tp[t].principal.radius;
        }
        ch.corner_angle.resize(d);
        for (int k = 0; k < d; ++k)
            ch.corner_angle[k] = pm.corner_angle(ch.corners[(k + d - 1) % d], ch.corners[k], ch.corners[(k + 1) % d]);
        local[v] = ch;
    }

    // Euclidean normalization to unit total area.
    if (!pm.hyperbolic) {
        double area = 0.0;
        for (const auto& ch : local) area += pm.polygon_area(ch.corners);
        p.scale = 1.0 / std::sqrt(area);
        for (auto& ch : local) {
            for (auto& q : ch.corners) q = Pt(q[0] * p.scale, q[1] * p.scale, 1.0);
            for (auto& r : ch.corner_radius) r *= p.scale;
            ch.principal.center = Pt(ch.principal.center[0] * p.scale, ch.principal.center[1] * p.scale, 1.0);
            ch.principal.radius *= p.scale;
        }
    }

    std::map<int, std::pair<int, int>> side_of;  // half-edge -> (chart, side)
    for (int v = 0; v < P; ++v)
        for (std::size_t k = 0; k < tc.pyramids[v].side_half_edges.size(); ++k)
            side_of[tc.pyramids[v].side_half_edges[k]] = {v, static_cast<int>(k)};

    p.charts.resize(P);
    std::vector<char> placed(P, 0);
    std::vector<int> parent_edge(P, -1);
    auto place = [&](int v, const Motion& M, int parent) {
        Chart ch = local[v];
        ch.placement = M;
        ch.parent = parent;
        for (auto& q : ch.corners) q = pm.apply(M, q);
        ch.principal.center = pm.apply(M, ch.principal.center);
        p.charts[v] = ch;
        placed[v] = 1;
    };
    // Motion taking chart b's local corners at side kb onto chart a's
    // developed corners at side ka.
    auto glue = [&](int a, int ka, int b, int kb) {
        const int da = static_cast<int>(p.charts[a].corners.size());
        const int db = static_cast<int>(local[b].corners.size());
        const Pt& A0 = p.charts[a].corners[ka];
        const Pt& A1 = p.charts[a].corners[(ka + 1) % da];
        const Pt& B0 = local[b].corners[(kb + 1) % db];
        const Pt& B1 = local[b].corners[kb];
        return pm.motion(B0, B1, A0, A1);
    };
    if (P > 0) {
        const auto& c0 = local[0].corners;
        double d01 = pm.dist(c0[0], c0[1]);
        place(0, pm.motion(c0[0], c0[1], pm.point(0.0, 0.0), pm.along(d01)), -1);
        std::deque<int> queue = {0};
        while (!queue.empty()) {
            int a = queue.front();
            queue.pop_front();
            const auto& py = tc.pyramids[a];
            for (std::size_t k = 0; k < py.side_half_edges.size(); ++k) {
                auto [b, kb] = side_of.at(c.twin[py.side_half_edges[k]]);
                if (placed[b]) continue;
                place(b, glue(a, static_cast<int>(k), b, kb), a);
                parent_edge[b] = c.edge_of[py.side_half_edges[k]];
                queue.push_back(b);
            }
        }
    }

    p.gluings.resize(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e) {
        int h = c.edge_half_edge[e];
        auto [a, ka] = side_of.at(h);
        auto [b, kb] = side_of.at(c.twin[h]);
        EdgeGluing g;
        g.edge = e;
        g.chart_a = a;
        g.side_a = ka;
        g.chart_b = b;
        g.side_b = kb;
        g.transition = glue(a, ka, b, kb) * pm.inverse(p.charts[b].placement);
        g.tree = parent_edge[a] == e || parent_edge[b] == e;
        p.gluings[e] = g;
    }

    p.dual.assign(c.num_faces(), PlaneCircle{});
    p.dual_chart.assign(c.num_faces(), -1);
    p.dual_ideal.assign(c.num_faces(), false);
    p.cone_angle.assign(c.num_faces(), 0.0);
    double radius_spread = 0.0;
    std::vector<int> order;
    {
        std::vector<char> vis(P, 0);
        std::deque<int> q = {0};
        vis[0] = 1;
        while (!q.empty()) {
            int a = q.front();
            q.pop_front();
            order.push_back(a);
            for (int b = 0; b < P; ++b)
                if (!vis[b] && p.charts[b].parent == a) {
                    vis[b] = 1;
                    q.push_back(b);
                }
        }
    }
    for (int v : order) {
        const Chart& ch = p.charts[v];
        for (std::size_t k = 0; k < ch.faces.size(); ++k) {
            int f = ch.faces[k];
            p.cone_angle[f] += ch.corner_angle[k];
            if (p.dual_chart[f] < 0) {
                p.dual_chart[f] = v;
                p.dual[f] = {ch.corners[k], ch.corner_radius[k]};
                p.dual_ideal[f] = tc.face_ideal[f];
            } else {
                radius_spread = std::max(radius_spread, std::abs(ch.corner_radius[k] - p.dual[f].radius));
            }
        }
    }
    p.face_edges.resize(c.num_faces());
    for (int f = 0; f < c.num_faces(); ++f)
        for (int h : c.face_half_edges[f]) p.face_edges[f].push_back(c.edge_of[h]);
    p.residuals["tet_placement_consistency"] = consistency;
    p.residuals["dual_radius_spread"] = radius_spread;
    p.residuals["edge_length_residual"] = sol.length_residual;
    return p;
}

// Intersection angle of the principal circles at an edge, with both circles
// in chart a's coordinates.
inline double measured_theta(const Pattern& p, int e) {
    const auto& g = p.gluings[e];
    const PlaneModel& pm = p.model;
    const auto& A = p.charts[g.chart_a].principal;
    const auto& B = p.charts[g.chart_b].principal;
    Pt bc = pm.apply(g.transition, B.center);
    return pm.intersection_angle(A.center, A.radius, bc, B.radius);
}

inline std::vector<double> measured_thetas(const Pattern& p) {
    std::vector<double> out(p.gluings.size());
    for (std::size_t e = 0; e < p.gluings.size(); ++e) out[e] = measured_theta(p, static_cast<int>(e));
    return out;
}

struct VerifyTolerances {
    double theta = 1e-6;
    double cone = 1e-6;
    double bouquet = 1e-8;
    double gauss_bonnet = 1e-8;
    double collinearity = 1e-6;
    double orthogonality = 1e-6;
};

// Recomputes angles and incidences from circle geometry and compares them to
// the angle data.
inline Json verify_pattern(const Pattern& p, const ConditionInstance& data, const VerifyTolerances& tol = {}) {
    const PlaneModel& pm = p.model;
    Json r = p.residuals;
    auto theta = measured_thetas(p);
    double theta_err = 0.0;
    for (std::size_t e = 0; e < theta.size(); ++e) theta_err = std::max(theta_err, std::abs(theta[e] - data.theta[e].value));
    double cone_err = 0.0;
    double sum_kappa = 0.0;
    for (std::size_t f = 0; f < p.cone_angle.size(); ++f) {
        cone_err = std::max(cone_err, std::abs(p.cone_angle[f] - (2.0 * kPi - data.kappa[f].value)));
        sum_kappa += 2.0 * kPi - p.cone_angle[f];
    }
    double bouquet = 0.0;
    int ideal_count = 0;
    for (std::size_t f = 0; f < p.dual.size(); ++f) {
        if (!p.dual_ideal[f]) continue;
        ++ideal_count;
        std::vector<double> around;
        for (int e : p.face_edges[f]) around.push_back(theta[e]);
        double s = std::accumulate(around.begin(), around.end(), 0.0);
        bouquet = std::max(bouquet, std::abs(s - (2.0 * kPi - data.kappa[f].value)));
    }
    double collinear = 0.0, orth = 0.0, overlap = std::numeric_limits<double>::infinity();
    for (const auto& g : p.gluings) {
        const Chart& A = p.charts[g.chart_a];
        const Chart& B = p.charts[g.chart_b];
        const int da = static_cast<int>(A.corners.size());
        Pt bc = pm.apply(g.transition, B.principal.center);
        auto pts = pm.circle_intersections(A.principal.center, A.principal.radius, bc, B.principal.radius);
        if (pts.size() != 2) {
            collinear = std::numeric_limits<double>::infinity();
            continue;
        }
        for (const auto& q : pts)
            collinear = std::max(collinear, pm.line_distance(q, A.corners[g.side_a], A.corners[(g.side_a + 1) % da]));
    }
    for (const auto& ch : p.charts) {
        const int d = static_cast<int>(ch.corners.size());
        for (int k = 0; k < d; ++k) {
            double dd = pm.dist(ch.principal.center, ch.corners[k]);
            if (ch.corner_radius[k] == 0.0)
                orth = std::max(orth, std::abs(dd - ch.principal.radius));
            else
                orth = std::max(orth, std::abs(pm.intersection_cos(ch.principal.center, ch.principal.radius, ch.corners[k],
                                                                   ch.corner_radius[k])));
            for (int l = k + 1; l < d; ++l) {
                if (ch.faces[k] == ch.faces[l]) continue;
                overlap = std::min(overlap, pm.dist(ch.corners[k], ch.corners[l]) - ch.corner_radius[k] - ch.corner_radius[l]);
            }
        }
    }
    double area = 0.0;
    for (const auto& ch : p.charts) area += pm.polygon_area(ch.corners);
    double gb;
    if (!pm.hyperbolic)
        gb = std::abs(sum_kappa - 2.0 * kPi * p.euler_characteristic);
    else
        gb = std::abs(sum_kappa - 2.0 * kPi * p.euler_characteristic - area);
    r["theta_max_error"] = theta_err;
    r["cone_angle_max_error"] = cone_err;
    r["bouquet_max_error"] = bouquet;
    r["ideal_faces"] = ideal_count;
    r["gauss_bonnet_error"] = gb;
    r["collinearity_max"] = collinear;
    r["orthogonality_max"] = orth;
    r["dual_disjointness_min_gap"] = std::isinf(overlap) ? 0.0 : overlap;
    r["total_area"] = area;
    r["sum_kappa"] = sum_kappa;
    bool ok = theta_err < tol.theta && cone_err < tol.cone && bouquet < tol.bouquet && gb < tol.gauss_bonnet &&
              collinear < tol.collinearity && orth < tol.orthogonality && !(overlap < -tol.orthogonality);
    r["ok"] = ok;
    return r;
}

inline Json pattern_to_json(const Pattern& p) {
    const PlaneModel& pm = p.model;
    auto xy = [&](const Pt& q) {
        auto a = pm.xy(q);
        return std::vector<double>{a[0], a[1]};
    };
    Json j;
    j["geometry"] = geometry_name(p.geometry);
    j["model"] = pm.hyperbolic ? "klein" : "plane";
    j["scale"] = p.scale;
    j["euler_characteristic"] = p.euler_characteristic;
    Json charts = Json::array(), principal = Json::array();
    for (const auto& ch : p.charts) {
        Json c;
        c["vertex"] = ch.vertex;
        c["faces"] = ch.faces;
        Json poly = Json::array();
        for (const auto& q : ch.corners) poly.push_back(xy(q));
        c["polygon"] = poly;
        c["corner_radii"] = ch.corner_radius;
        c["corner_angles"] = ch.corner_angle;
        c["parent"] = ch.parent;
        c["principal"] = {{"center", xy(ch.principal.center)}, {"radius", ch.principal.radius}};
        charts.push_back(c);
        principal.push_back({{"vertex", ch.vertex}, {"center", xy(ch.principal.center)}, {"radius", ch.principal.radius}});
    }
    j["charts"] = charts;
    j["principal_circles"] = principal;
    Json dual = Json::array();
    for (std::size_t f = 0; f < p.dual.size(); ++f)
        dual.push_back({{"face", f},
                        {"center", xy(p.dual[f].center)},
                        {"radius", p.dual[f].radius},
                        {"ideal", static_cast<bool>(p.dual_ideal[f])},
                        {"cone_angle", p.cone_angle[f]},
                        {"chart", p.dual_chart[f]}});
    j["dual_circles"] = dual;
    Json th = Json::object();
    auto theta = measured_thetas(p);
    for (std::size_t e = 0; e < theta.size(); ++e) th[std::to_string(e)] = theta[e];
    j["measured_theta"] = th;
    Json kap = Json::object();
    for (std::size_t f = 0; f < p.cone_angle.size(); ++f) kap[std::to_string(f)] = 2.0 * kPi - p.cone_angle[f];
    j["measured_kappa"] = kap;
    Json hol = Json::array();
    for (const auto& g : p.gluings) {
        if (g.tree) continue;
        std::vector<std::vector<double>> m(3, std::vector<double>(3));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m[a][b] = g.transition(a, b);
        hol.push_back({{"edge", g.edge}, {"from_chart", g.chart_b}, {"to_chart", g.chart_a}, {"matrix", m}});
    }
    j["holonomy"] = hol;
    j["residuals"] = p.residuals;
    return j;
}

// Restricts a pattern on a doubled surface to one half and reads off the
// framed angles.
inline Json restrict_symmetric(const Pattern& p, const ExtendedComplex& x, const DoubledComplex& d,
                               const ConditionInstance& framed, double max_asymmetry = 1e-6) {
    const CellComplex& D = d.complex;
    const auto& iota = d.involution;
    auto theta = measured_thetas(p);
    std::map<int, int> chart_of_vertex;
    for (std::size_t i = 0; i < p.charts.size(); ++i) chart_of_vertex[p.charts[i].vertex] = static_cast<int>(i);
    double asym = 0.0;
    for (int v = 0; v < D.num_vertices; ++v) {
        const auto& a = p.charts[chart_of_vertex.at(v)].principal;
        const auto& b = p.charts[chart_of_vertex.at(iota.vertex[v])].principal;
        asym = std::max(asym, std::abs(a.radius - b.radius));
    }
    for (int h = 0; h < D.num_half_edges(); ++h) {
        int j = iota.half_edge[h];
        int f = D.face_of[h], g = D.face_of[j];
        asym = std::max(asym, std::abs(p.dual[f].radius - p.dual[g].radius));
        asym = std::max(asym, std::abs(p.cone_angle[f] - p.cone_angle[g]));
        asym = std::max(asym, std::abs(theta[D.edge_of[h]] - theta[D.edge_of[j]]));
    }
    if (asym > max_asymmetry)
        throw Error("AsymmetricSolution", "pattern is not symmetric under the doubling involution",
                    {{"residual", asym}, {"limit", max_asymmetry}});
    Json out;
    out["symmetry_residual"] = asym;
    double err = 0.0;
    Json base_theta = Json::object();
    for (int e = 0; e < x.base.num_edges(); ++e) {
        double t = theta[d.edge_plus[e]];
        base_theta[std::to_string(e)] = t;
        err = std::max(err, std::abs(t - framed.theta[e].value));
    }
    Json boundary = Json::array();
    for (int e : x.spoke_edges) {
        double b = 0.5 * theta[d.spoke_edge[e]];
        boundary.push_back({{"edge", e}, {"angle", b}});
        err = std::max(err, std::abs(b - framed.theta[e].value));
    }
    Json polygonal = Json::array(), corners = Json::array();
    for (const auto& col : x.collars) {
        int f = d.collar_face[col.face];
        double a = 0.5 * (2.0 * kPi - p.cone_angle[f]);
        polygonal.push_back({{"edge", col.boundary_edge}, {"angle", a}});
        err = std::max(err, std::abs(a - framed.theta[col.boundary_edge].value));
        auto c = p.model.xy(p.dual[f].center);
        corners.push_back({{"collar_face", col.face}, {"center", {c[0], c[1]}}, {"chart", p.dual_chart[f]}});
    }
    Json faces = Json::array();
    for (int f = 0; f < x.base.num_faces(); ++f) {
        int g = d.face_plus[f];
        auto c = p.model.xy(p.dual[g].center);
        faces.push_back({{"face", f}, {"center", {c[0], c[1]}}, {"radius", p.dual[g].radius}, {"cone_angle", p.cone_angle[g]}});
    }
    Json principal = Json::array();
    for (int v = 0; v < x.base.num_vertices; ++v) {
        const auto& ch = p.charts[chart_of_vertex.at(v)];
        auto c = p.model.xy(ch.principal.center);
        principal.push_back({{"vertex", v}, {"center", {c[0], c[1]}}, {"radius", ch.principal.radius}});
    }
    out["theta"] = base_theta;
    out["boundary_angles"] = boundary;
    out["polygonal_angles"] = polygonal;
    out["boundary_polygon"] = corners;
    out["boundary_segments"] = static_cast<int>(x.spoke_edges.size());
    out["dual_circles"] = faces;
    out["principal_circles"] = principal;
    out["framed_angle_max_error"] = err;
    return out;
}

}  // namespace hyperpat
