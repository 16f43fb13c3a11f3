// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/tetrahedron.hpp"

#include <array>
#include <cmath>

namespace hyperpat {

// Hyperideal triangles in R^{2,1}: hyperideal vertices are unit spacelike,
// ideal vertices are null and carry the horocycle {p : <p, u> = -1}.
// Edge i is opposite vertex i.
using Vec3m = Eigen::Vector3d;

inline double mdot3(const Vec3m& a, const Vec3m& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

struct HyperidealTriangle {
    std::array<Vec3m, 3> vertices;
    std::array<VertexType, 3> types{};
};

inline constexpr std::array<std::array<int, 2>, 3> kTriangleEdges = {{{1, 2}, {0, 2}, {0, 1}}};

inline std::array<double, 3> triangle_lengths(const HyperidealTriangle& t) {
    std::array<double, 3> l{};
    for (int e = 0; e < 3; ++e) {
        int a = kTriangleEdges[e][0], b = kTriangleEdges[e][1];
        double p = mdot3(t.vertices[a], t.vertices[b]);
        bool ia = t.types[a] == VertexType::ideal, ib = t.types[b] == VertexType::ideal;
        if (ia && ib)
            l[e] = std::log(-p / 2.0);
        else if (ia || ib)
            l[e] = std::log(-p);
        else
            l[e] = std::acosh(-p);
    }
    return l;
}

// Builds the unique (up to isometry) triangle with the given truncated edge
// lengths and vertex types.
inline HyperidealTriangle triangle_from_lengths(const std::array<double, 3>& lengths,
                                                const std::array<VertexType, 3>& types) {
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) G(i, i) = types[i] == VertexType::ideal ? 0.0 : 1.0;
    for (int e = 0; e < 3; ++e) {
        int a = kTriangleEdges[e][0], b = kTriangleEdges[e][1];
        bool ia = types[a] == VertexType::ideal, ib = types[b] == VertexType::ideal;
        double g;
        if (ia && ib)
            g = -2.0 * std::exp(lengths[e]);
        else if (ia || ib)
            g = -std::exp(lengths[e]);
        else
            g = -std::cosh(lengths[e]);
        G(a, b) = G(b, a) = g;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
    const auto& lam = es.eigenvalues();
    if (!(lam[0] < -kSignatureTol && lam[1] > kSignatureTol)) {
        Json w;
        w["lengths"] = lengths;
        throw Error("InvalidTriangle", "vertex Gram matrix does not have signature (2,1)", w);
    }
    const auto& Q = es.eigenvectors();
    HyperidealTriangle t;
    t.types = types;
    for (int i = 0; i < 3; ++i)
        t.vertices[i] = Vec3m(std::sqrt(lam[1]) * Q(i, 1), std::sqrt(lam[2]) * Q(i, 2), std::sqrt(-lam[0]) * Q(i, 0));
    // Ideal vertices must be future pointing.
    for (int i = 0; i < 3; ++i) {
        if (types[i] == VertexType::ideal && t.vertices[i][2] < 0.0) {
            for (auto& v : t.vertices) v = -v;
            break;
        }
    }
    return t;
}

}  // namespace hyperpat
