// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/minkowski.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hyperpat {

enum class VertexType : std::uint8_t { ideal, hyperideal };

// How the horosphere at each ideal vertex is fixed before per-vertex shifts.
//   opposite_face:   tangent to the face opposite the vertex.
//   euclidean_apex:  vertex 0 tangent to face 0; other ideal vertices tangent
//                    to the horosphere at vertex 0.
//   hyperbolic_apex: vertex 0 is hyperideal; ideal vertices tangent to its
//                    dual plane.
enum class HoroConvention : std::uint8_t { opposite_face, euclidean_apex, hyperbolic_apex };

// Edge slots of the abstract tetrahedron, as vertex pairs.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int edge_slot(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
        if (kEdgeVertices[e][0] == a && kEdgeVertices[e][1] == b) return e;
    throw Error("InvalidEdge", "no edge between equal vertices");
}

// The two faces (indexed by opposite vertex) containing an edge.
inline std::array<int, 2> edge_faces(int e) {
    std::array<int, 2> out{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != kEdgeVertices[e][0] && v != kEdgeVertices[e][1]) out[k++] = v;
    return out;
}

inline double link_sum(const std::array<double, 6>& angles, int v) {
    double s = 0.0;
    for (int e = 0; e < 6; ++e)
        if (kEdgeVertices[e][0] == v || kEdgeVertices[e][1] == v) s += angles[e];
    return s;
}

inline constexpr double kIdealLinkTol = 1e-9;
inline constexpr double kSignatureTol = 1e-10;

struct Tet {
    std::array<double, 6> angles{};
    std::array<VertexType, 4> types{};
    // Outward unit normals; face i is opposite vertex i and the tetrahedron
    // is the region <x, n_i> <= 0.
    std::array<Vec4, 4> normals;
    // Hyperideal vertices are unit spacelike; ideal vertices are future null
    // with <v_i, n_i> = -1.
    std::array<Vec4, 4> vertices;
    HoroConvention horo = HoroConvention::opposite_face;
    // Per-vertex log-scale applied on top of the convention.
    std::array<double, 4> horo_shift{};

    bool ideal(int v) const { return types[v] == VertexType::ideal; }
};

namespace detail {

inline Json tet_witness(const std::array<double, 6>& angles, const std::array<VertexType, 4>& types) {
    Json w;
    w["angles"] = angles;
    Json t = Json::array();
    for (auto ty : types) t.push_back(ty == VertexType::ideal ? "ideal" : "hyperideal");
    w["vertex_types"] = t;
    return w;
}

}  // namespace detail

inline Tet tet_from_angles(const std::array<double, 6>& angles, const std::array<VertexType, 4>& types) {
    Json witness = detail::tet_witness(angles, types);
    for (int e = 0; e < 6; ++e) {
        if (!(angles[e] > 0.0 && angles[e] < kPi)) {
            witness["edge"] = e;
            throw Error("InfeasibleAngles", "interior angle outside (0, pi)", witness);
        }
    }
    for (int v = 0; v < 4; ++v) {
        double s = link_sum(angles, v);
        witness["vertex"] = v;
        witness["link_sum"] = s;
        if (types[v] == VertexType::ideal && std::abs(s - kPi) > kIdealLinkTol)
            throw Error("InfeasibleAngles", "ideal vertex link sum differs from pi", witness);
        if (types[v] == VertexType::hyperideal && !(s < kPi))
            throw Error("InfeasibleAngles", "hyperideal vertex link sum not below pi", witness);
    }
    witness.erase("vertex");
    witness.erase("link_sum");

    Mat4 G = Mat4::Identity();
    for (int e = 0; e < 6; ++e) {
        auto f = edge_faces(e);
        G(f[0], f[1]) = G(f[1], f[0]) = -std::cos(angles[e]);
    }
    Eigen::SelfAdjointEigenSolver<Mat4> es(G);
    const Eigen::Vector4d& lam = es.eigenvalues();
    if (!(lam[0] < -kSignatureTol && lam[1] > kSignatureTol)) {
        witness["gram_eigenvalues"] = std::vector<double>(lam.data(), lam.data() + 4);
        throw Error("InfeasibleAngles", "Gram matrix does not have signature (3,1)", witness);
    }
    const Mat4& Q = es.eigenvectors();

    Tet t;
    t.angles = angles;
    t.types = types;
    for (int i = 0; i < 4; ++i) {
        Vec4 n;
        n[0] = std::sqrt(lam[1]) * Q(i, 1);
        n[1] = std::sqrt(lam[2]) * Q(i, 2);
        n[2] = std::sqrt(lam[3]) * Q(i, 3);
        n[3] = std::sqrt(-lam[0]) * Q(i, 0);
        t.normals[i] = n;
    }
    Mat4 Ginv = Q * lam.cwiseInverse().asDiagonal() * Q.transpose();
    for (int i = 0; i < 4; ++i) {
        Vec4 w = Vec4::Zero();
        for (int j = 0; j < 4; ++j) w += Ginv(i, j) * t.normals[j];
        Vec4 v = -w;
        if (types[i] == VertexType::hyperideal) {
            if (!(Ginv(i, i) > 0.0)) {
                witness["vertex"] = i;
                throw Error("InfeasibleAngles", "hyperideal vertex is not outside the sphere", witness);
            }
            v /= std::sqrt(Ginv(i, i));
        }
        t.vertices[i] = v;
    }

    // Orient so that timelike points of the cone are future pointing.
    Vec4 probe;
    if (t.ideal(0)) {
        probe = t.vertices[0];
    } else {
        probe = t.vertices[1] - mdot(t.vertices[0], t.vertices[1]) * t.vertices[0];
    }
    if (probe[3] < 0.0) {
        for (int i = 0; i < 4; ++i) {
            t.normals[i] = -t.normals[i];
            t.vertices[i] = -t.vertices[i];
        }
    }
    for (int e = 0; e < 6; ++e) {
        int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
        double p = mdot(t.vertices[a], t.vertices[b]);
        double bound = (t.ideal(a) || t.ideal(b)) ? 0.0 : -1.0;
        if (!(p < bound)) {
            witness["edge"] = e;
            witness["pairing"] = p;
            throw Error("InfeasibleAngles", "edge does not meet hyperbolic space", witness);
        }
    }
    return t;
}

inline std::array<double, 6> angles_from_normals(const Tet& t) {
    std::array<double, 6> out{};
    for (int e = 0; e < 6; ++e) {
        auto f = edge_faces(e);
        double c = -mdot(t.normals[f[0]], t.normals[f[1]]);
        out[e] = std::acos(std::clamp(c, -1.0, 1.0));
    }
    return out;
}

// Horosphere vectors: the horosphere at an ideal vertex is {p : <p, u> = -1}.
// Entries for hyperideal vertices hold the unit dual vector.
inline std::array<Vec4, 4> horosphere_vectors(const Tet& t) {
    std::array<Vec4, 4> u;
    for (int i = 0; i < 4; ++i) u[i] = t.vertices[i];
    switch (t.horo) {
    case HoroConvention::opposite_face:
        break;
    case HoroConvention::euclidean_apex: {
        if (!t.ideal(0)) throw Error("InvalidConvention", "euclidean_apex needs an ideal vertex 0");
        u[0] = t.vertices[0] * std::exp(t.horo_shift[0]);
        for (int i = 1; i < 4; ++i)
            if (t.ideal(i)) u[i] = t.vertices[i] * (-2.0 / mdot(u[0], t.vertices[i]));
        break;
    }
    case HoroConvention::hyperbolic_apex: {
        if (t.ideal(0)) throw Error("InvalidConvention", "hyperbolic_apex needs a hyperideal vertex 0");
        for (int i = 1; i < 4; ++i)
            if (t.ideal(i)) u[i] = t.vertices[i] * (-1.0 / mdot(t.vertices[i], t.vertices[0]));
        break;
    }
    }
    for (int i = 0; i < 4; ++i) {
        if (!t.ideal(i)) continue;
        if (t.horo == HoroConvention::euclidean_apex && i == 0) continue;
        u[i] *= std::exp(t.horo_shift[i]);
    }
    return u;
}

// Oriented distance between the truncating objects at the ends of an edge.
inline double edge_length(const Tet& t, int e, const std::array<Vec4, 4>& u) {
    int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
    double p = mdot(u[a], u[b]);
    if (t.ideal(a) && t.ideal(b)) return std::log(-p / 2.0);
    if (t.ideal(a) || t.ideal(b)) return std::log(-p);
    return std::acosh(-p);
}

inline std::array<double, 6> edge_lengths(const Tet& t) {
    auto u = horosphere_vectors(t);
    std::array<double, 6> l{};
    for (int e = 0; e < 6; ++e) l[e] = edge_length(t, e, u);
    return l;
}

// Truncated polyhedron: vertices are hyperboloid points or future null
// vectors, faces carry outward unit normals and a cyclic vertex list.
struct Polyhedron {
    struct Face {
        Vec4 normal;
        std::vector<int> cycle;
    };
    std::vector<Vec4> points;
    std::vector<bool> ideal;
    std::vector<Face> faces;
    // Each polyhedron edge (sorted point pair) lists its two faces.
    std::map<std::pair<int, int>, std::array<int, 2>> edge_faces;
};

inline Polyhedron truncated_polyhedron(const Tet& t) {
    Polyhedron P;
    std::array<int, 4> ideal_id{};
    std::array<std::array<int, 4>, 4> trunc_id{};
    for (int i = 0; i < 4; ++i) {
        if (t.ideal(i)) {
            ideal_id[i] = static_cast<int>(P.points.size());
            P.points.push_back(t.vertices[i] / t.vertices[i][3]);
            P.ideal.push_back(true);
            continue;
        }
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            Vec4 x = t.vertices[j] - mdot(t.vertices[i], t.vertices[j]) * t.vertices[i];
            trunc_id[i][j] = static_cast<int>(P.points.size());
            P.points.push_back(to_hyperboloid(x));
            P.ideal.push_back(false);
        }
    }
    for (int k = 0; k < 4; ++k) {
        std::array<int, 3> c{};
        int m = 0;
        for (int v = 0; v < 4; ++v)
            if (v != k) c[m++] = v;
        Polyhedron::Face f;
        f.normal = t.normals[k];
        for (int s = 0; s < 3; ++s) {
            int prev = c[(s + 2) % 3], cur = c[s], next = c[(s + 1) % 3];
            if (t.ideal(cur)) {
                f.cycle.push_back(ideal_id[cur]);
            } else {
                f.cycle.push_back(trunc_id[cur][prev]);
                f.cycle.push_back(trunc_id[cur][next]);
            }
        }
        P.faces.push_back(f);
    }
    for (int i = 0; i < 4; ++i) {
        if (t.ideal(i)) continue;
        Polyhedron::Face f;
        f.normal = t.vertices[i];
        for (int j = 0; j < 4; ++j)
            if (j != i) f.cycle.push_back(trunc_id[i][j]);
        P.faces.push_back(f);
    }
    for (int fi = 0; fi < static_cast<int>(P.faces.size()); ++fi) {
        const auto& cyc = P.faces[fi].cycle;
        for (std::size_t s = 0; s < cyc.size(); ++s) {
            int a = cyc[s], b = cyc[(s + 1) % cyc.size()];
            auto key = std::minmax(a, b);
            auto it = P.edge_faces.find(key);
            if (it == P.edge_faces.end())
                P.edge_faces[key] = {fi, -1};
            else
                it->second[1] = fi;
        }
    }
    return P;
}

// A point in the interior of the truncated polyhedron.
inline Vec4 interior_point(const Polyhedron& P) {
    Vec4 s = Vec4::Zero();
    for (const auto& p : P.points) s += p;
    return to_hyperboloid(s);
}

inline Json tet_to_json(const Tet& t) {
    Json j = detail::tet_witness(t.angles, t.types);
    auto vec = [](const Vec4& v) { return std::vector<double>{v[0], v[1], v[2], v[3]}; };
    for (int i = 0; i < 4; ++i) {
        j["normals"].push_back(vec(t.normals[i]));
        j["vertices"].push_back(vec(t.vertices[i]));
    }
    j["lengths"] = edge_lengths(t);
    return j;
}

}  // namespace hyperpat
