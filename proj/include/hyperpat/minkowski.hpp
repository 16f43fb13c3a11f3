// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/common.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace hyperpat {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Bilinear form of signature (3,1); the last coordinate is time.
inline double mdot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3];
}

inline Mat4 minkowski_form() {
    Mat4 J = Mat4::Identity();
    J(3, 3) = -1.0;
    return J;
}

// Scales a timelike vector onto the future sheet of the hyperboloid.
inline Vec4 to_hyperboloid(const Vec4& x) {
    double q = mdot(x, x);
    if (!(q < 0.0)) throw Error("NotTimelike", "vector is not timelike", {{"norm", q}});
    Vec4 p = x / std::sqrt(-q);
    return p[3] < 0.0 ? Vec4(-p) : p;
}

inline Vec4 normalize_spacelike(const Vec4& x) {
    double q = mdot(x, x);
    if (!(q > 0.0)) throw Error("NotSpacelike", "vector is not spacelike", {{"norm", q}});
    return x / std::sqrt(q);
}

// Point dual to a plane with unit spacelike normal, and plane dual to a
// hyperideal point; both are represented by the same unit spacelike vector.
inline Vec4 dual_point(const Vec4& plane_normal) { return normalize_spacelike(plane_normal); }
inline Vec4 dual_plane(const Vec4& point) { return normalize_spacelike(point); }

// The vector n with <n, x> = det(a, b, c, x).
inline Vec4 mcross(const Vec4& a, const Vec4& b, const Vec4& c) {
    Vec4 n;
    Mat4 M;
    M.col(0) = a;
    M.col(1) = b;
    M.col(2) = c;
    for (int i = 0; i < 4; ++i) {
        M.col(3) = Vec4::Unit(i);
        n[i] = M.determinant();
    }
    n[3] = -n[3];
    return n;
}

// Distance between two points of the hyperboloid, accurate for close points.
inline double hdist(const Vec4& x, const Vec4& y) {
    Vec4 d = x - y;
    double q = std::max(0.0, mdot(d, d));
    return 2.0 * std::asinh(std::sqrt(q) / 2.0);
}

// Klein-model coordinates of a future timelike or null vector.
inline Eigen::Vector3d klein(const Vec4& x) { return x.head<3>() / x[3]; }

}  // namespace hyperpat
