// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/lobachevsky.hpp"
#include "hyperpat/tetrahedron.hpp"

#include <cmath>
#include <limits>

namespace hyperpat {

// Volume of the orthoscheme (O, P, Q, W) where OP is orthogonal to the plane
// PQW and QW is orthogonal to the plane OPQ, from its three leg lengths. W may
// be ideal (qw = +infinity).
inline double orthoscheme_volume(double op, double pq, double qw) {
    double tanh_qw = std::isinf(qw) ? 1.0 : std::tanh(qw);
    double sinh_qw = std::isinf(qw) ? std::numeric_limits<double>::infinity() : std::sinh(qw);
    double alpha = std::atan2(std::tanh(op), std::sinh(pq));
    double gamma = std::atan2(tanh_qw, std::sinh(pq));
    double omega = std::atan2(std::tanh(pq), sinh_qw);
    double sa = std::sin(alpha), ca = std::cos(alpha);
    double so = std::sin(omega), co = std::cos(omega);
    double beta = std::atan2(std::sqrt(ca * ca + sa * sa * so * so), sa * co);
    double delta = std::atan2(sa * tanh_qw, ca);
    const double h = kPi / 2.0;
    return 0.25 * (lobachevsky(alpha + delta) - lobachevsky(alpha - delta) + lobachevsky(gamma + delta) -
                   lobachevsky(gamma - delta) - lobachevsky(h - beta + delta) + lobachevsky(h - beta - delta) +
                   2.0 * lobachevsky(h - delta));
}

// Signed orthoscheme decomposition of a convex finite-volume polyhedron from
// an interior point.
inline double polyhedron_volume(const Polyhedron& P) {
    Vec4 O = interior_point(P);
    double total = 0.0;
    for (int fi = 0; fi < static_cast<int>(P.faces.size()); ++fi) {
        const auto& F = P.faces[fi];
        double on = mdot(O, F.normal);
        Vec4 Pf = to_hyperboloid(O - on * F.normal);
        double op = std::asinh(std::abs(on));
        const auto& cyc = F.cycle;
        for (std::size_t s = 0; s < cyc.size(); ++s) {
            int ia = cyc[s], ib = cyc[(s + 1) % cyc.size()];
            const auto& adj = P.edge_faces.at(std::minmax(ia, ib));
            int gi = adj[0] == fi ? adj[1] : adj[0];
            double eps_fe = mdot(Pf, P.faces[gi].normal) <= 0.0 ? 1.0 : -1.0;
            const Vec4& A = P.points[ia];
            const Vec4& B = P.points[ib];
            double aa = mdot(A, A), ab = mdot(A, B), bb = mdot(B, B);
            double oa = mdot(O, A), ob = mdot(O, B);
            double det = aa * bb - ab * ab;
            double ca = (oa * bb - ob * ab) / det;
            double cb = (aa * ob - ab * oa) / det;
            Vec4 Qraw = ca * A + cb * B;
            if (Qraw[3] < 0.0) {
                ca = -ca;
                cb = -cb;
            }
            Vec4 Q = to_hyperboloid(Qraw);
            double pq = hdist(Pf, Q);
            for (int w = 0; w < 2; ++w) {
                int iw = w == 0 ? ia : ib;
                double other = w == 0 ? cb : ca;
                double eps_ew = other >= 0.0 ? 1.0 : -1.0;
                double qw = P.ideal[iw] ? std::numeric_limits<double>::infinity() : hdist(Q, P.points[iw]);
                total += eps_fe * eps_ew * orthoscheme_volume(op, pq, qw);
            }
        }
    }
    return total;
}

inline double truncated_volume(const Tet& t) { return polyhedron_volume(truncated_polyhedron(t)); }

// Derivative of the volume with respect to the exterior dihedral angles:
// half the edge lengths under the tetrahedron's horosphere convention.
inline std::array<double, 6> schlafli_gradient(const Tet& t) {
    auto l = edge_lengths(t);
    for (auto& x : l) x *= 0.5;
    return l;
}

}  // namespace hyperpat
