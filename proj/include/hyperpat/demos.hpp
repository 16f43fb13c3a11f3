// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/conditions.hpp"

#include <string>
#include <vector>

namespace hyperpat {

// n x m square grid on the torus.
inline CellComplex torus_grid(int n, int m) {
    auto vid = [&](int i, int j) { return ((i % n + n) % n) * m + ((j % m + m) % m); };
    auto hl = [&](int i, int j) { return 2 * vid(i, j); };
    auto vl = [&](int i, int j) { return 2 * vid(i, j) + 1; };
    std::vector<FaceWord> faces;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            faces.push_back({{vid(i, j), hl(i, j)},
                             {vid(i + 1, j), vl(i + 1, j)},
                             {vid(i + 1, j + 1), hl(i, j + 1)},
                             {vid(i, j + 1), vl(i, j)}});
    return complex_from_faces(n * m, faces, SurfaceDeclaration{1, 0});
}

// Boundary of a tetrahedron.
inline CellComplex tetrahedron_graph() {
    auto l = [](int a, int b) { return a < b ? 4 * a + b : 4 * b + a; };
    std::vector<std::array<int, 3>> tri = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    std::vector<FaceWord> faces;
    for (auto t : tri) faces.push_back({{t[0], l(t[0], t[1])}, {t[1], l(t[1], t[2])}, {t[2], l(t[2], t[0])}});
    return complex_from_faces(4, faces, SurfaceDeclaration{0, 0});
}

// Genus two surface cut into six quadrilaterals meeting six at each of four
// vertices.
inline CellComplex genus_two_quads() {
    std::vector<FaceWord> faces = {{{0, 0}, {1, 1}, {2, 2}, {3, 3}},     {{3, 2}, {2, 5}, {1, 0}, {0, 7}},
                                   {{2, 8}, {3, 9}, {1, 10}, {0, 11}},   {{0, 12}, {2, 1}, {1, 9}, {3, 7}},
                                   {{2, 11}, {0, 3}, {3, 18}, {1, 5}},   {{0, 10}, {1, 18}, {3, 8}, {2, 12}}};
    return complex_from_faces(4, faces, SurfaceDeclaration{2, 0});
}

// A single square with its four sides on the boundary.
inline CellComplex square_disk() {
    return complex_from_faces(4, {{{0, 0}, {1, 1}, {2, 2}, {3, 3}}}, SurfaceDeclaration{0, 1});
}

struct Demo {
    std::string name;
    std::string description;
    CellComplex complex;
    Geometry geometry = Geometry::euclidean;
    bool framed = false;
    std::vector<Angle> theta;       // closed: per edge; framed: per edge of the extended graph
    std::vector<Angle> kappa;       // per face of the complex
};

inline std::vector<std::string> demo_names() {
    return {"torus-ideal-right-angles", "torus-hyperideal-2pi3", "k4-sphere-euclidean", "square-disk-framed", "genus2-hyperbolic"};
}

inline Demo make_demo(const std::string& name) {
    Demo d;
    d.name = name;
    if (name == "torus-ideal-right-angles" || name == "torus-hyperideal-2pi3") {
        d.complex = torus_grid(2, 2);
        Angle th = name == "torus-ideal-right-angles" ? pi_times(1, 2) : pi_times(2, 3);
        d.description = "flat torus, 2x2 grid";
        d.theta.assign(d.complex.num_edges(), th);
        d.kappa.assign(d.complex.num_faces(), pi_times(0));
    } else if (name == "k4-sphere-euclidean") {
        d.complex = tetrahedron_graph();
        d.description = "euclidean cone sphere on the tetrahedron graph";
        d.theta.assign(6, pi_times(1, 2));
        d.kappa.assign(4, pi_times(1));
    } else if (name == "genus2-hyperbolic") {
        d.complex = genus_two_quads();
        d.geometry = Geometry::hyperbolic;
        d.description = "hyperbolic genus two surface with six quadrilateral faces";
        d.theta.assign(d.complex.num_edges(), pi_times(2, 3));
        d.kappa.assign(d.complex.num_faces(), pi_times(0));
    } else if (name == "square-disk-framed") {
        d.complex = square_disk();
        d.framed = true;
        d.description = "framed euclidean square";
        ExtendedComplex x = extended_graph(d.complex);
        d.theta.assign(x.ext.num_edges(), pi_times(2, 3));
        for (int e : x.spoke_edges) d.theta[e] = pi_times(1, 3);
        for (int e : x.boundary_edges) d.theta[e] = pi_times(1, 2);
        d.kappa.assign(d.complex.num_faces(), pi_times(0));
    } else {
        throw Error("UnknownDemo", "no demo with this name", {{"name", name}});
    }
    return d;
}

inline ConditionInstance demo_instance(const Demo& d) {
    if (!d.framed) return closed_instance(d.complex, d.geometry, d.theta, d.kappa);
    return framed_instance(extended_graph(d.complex), d.geometry, d.theta, d.kappa);
}

}  // namespace hyperpat
