// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/tetrahedron.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <vector>

namespace hyperpat {

namespace detail {

using Vec3 = Eigen::Vector3d;

struct Rule {
    std::vector<double> x;  // nodes on [0, 1]
    std::vector<double> w;
};

template <unsigned N>
Rule unit_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.x.push_back(0.5);
            r.w.push_back(wt[i] / 2.0);
            continue;
        }
        r.x.push_back(0.5 - a[i] / 2.0);
        r.w.push_back(wt[i] / 2.0);
        r.x.push_back(0.5 + a[i] / 2.0);
        r.w.push_back(wt[i] / 2.0);
    }
    return r;
}

// Klein-model volume of the simplex (X, A, B, C) in Duffy coordinates
// collapsing at X, which may lie on the unit sphere.
struct DuffySimplex {
    Vec3 X, A, B, C;
    bool ideal_apex = false;
    double det = 0.0;

    double integrand(double s, double t, double w) const {
        Vec3 D = (A - X) + t * (B - A) + t * w * (C - B);
        if (ideal_apex) {
            double g = 2.0 * X.dot(D) + s * D.squaredNorm();
            return t * det / (g * g);
        }
        Vec3 x = X + s * D;
        double g = 1.0 - x.squaredNorm();
        return s * s * t * det / (g * g);
    }

    double box(const Rule& r, const double lo[3], const double hi[3]) const {
        double sum = 0.0;
        double h0 = hi[0] - lo[0], h1 = hi[1] - lo[1], h2 = hi[2] - lo[2];
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            double s = lo[0] + h0 * r.x[i];
            for (std::size_t j = 0; j < r.x.size(); ++j) {
                double t = lo[1] + h1 * r.x[j];
                double acc = 0.0;
                for (std::size_t k = 0; k < r.x.size(); ++k) acc += r.w[k] * integrand(s, t, lo[2] + h2 * r.x[k]);
                sum += r.w[i] * r.w[j] * acc;
            }
        }
        return sum * h0 * h1 * h2;
    }

    double adaptive(const Rule& lo_rule, const Rule& hi_rule, const double lo[3], const double hi[3], double tol,
                    int depth) const {
        double coarse = box(lo_rule, lo, hi);
        double fine = box(hi_rule, lo, hi);
        if (std::abs(fine - coarse) <= tol || depth == 0) return fine;
        double sum = 0.0;
        for (int c = 0; c < 8; ++c) {
            double l2[3], h2[3];
            for (int d = 0; d < 3; ++d) {
                double mid = 0.5 * (lo[d] + hi[d]);
                bool upper = (c >> d) & 1;
                l2[d] = upper ? mid : lo[d];
                h2[d] = upper ? hi[d] : mid;
            }
            sum += adaptive(lo_rule, hi_rule, l2, h2, tol / 8.0, depth - 1);
        }
        return sum;
    }
};

}  // namespace detail

// Adaptive quadrature of dx dy dz / (1 - |x|^2)^2 over the truncated
// polyhedron in the Klein model, coned from an interior point over a
// subdivision of each face into simplices with at most one ideal vertex.
inline double polyhedron_volume_quadrature(const Polyhedron& P, double tol = 1e-12) {
    using detail::Vec3;
    static const detail::Rule lo_rule = detail::unit_rule<10>();
    static const detail::Rule hi_rule = detail::unit_rule<15>();
    std::vector<Vec3> K;
    for (std::size_t i = 0; i < P.points.size(); ++i) {
        Vec3 k = klein(P.points[i]);
        if (P.ideal[i]) k.normalize();
        K.push_back(k);
    }
    Vec3 O = klein(interior_point(P));
    std::size_t count = 0;
    for (const auto& F : P.faces) count += 2 * F.cycle.size();
    double per_simplex_tol = tol / static_cast<double>(count);
    double total = 0.0;
    const double lo[3] = {0.0, 0.0, 0.0};
    const double hi[3] = {1.0, 1.0, 1.0};
    for (const auto& F : P.faces) {
        Vec3 G = Vec3::Zero();
        for (int v : F.cycle) G += K[v];
        G /= static_cast<double>(F.cycle.size());
        for (std::size_t s = 0; s < F.cycle.size(); ++s) {
            int ia = F.cycle[s], ib = F.cycle[(s + 1) % F.cycle.size()];
            Vec3 M = 0.5 * (K[ia] + K[ib]);
            for (int side = 0; side < 2; ++side) {
                int iv = side == 0 ? ia : ib;
                detail::DuffySimplex S;
                S.X = K[iv];
                S.A = M;
                S.B = G;
                S.C = O;
                S.ideal_apex = P.ideal[iv];
                S.det = std::abs((S.A - S.X).dot((S.B - S.A).cross(S.C - S.B)));
                total += S.adaptive(lo_rule, hi_rule, lo, hi, per_simplex_tol, 6);
            }
        }
    }
    return total;
}

inline double truncated_volume_quadrature(const Tet& t, double tol = 1e-12) {
    return polyhedron_volume_quadrature(truncated_polyhedron(t), tol);
}

}  // namespace hyperpat
