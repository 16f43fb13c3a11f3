// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/common.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperpat {

inline constexpr int kNone = -1;

// Half-edge representation of a cellular decomposition of a compact oriented
// surface. Faces lie to the left of their half-edges; half-edges on the
// surface boundary have no twin. Edges are numbered by their smallest
// half-edge, faces by the smallest half-edge of their orbit.
struct CellComplex {
    int num_vertices = 0;
    std::vector<int> origin, next, twin;

    std::vector<int> prev, face_of, edge_of;
    std::vector<std::vector<int>> face_half_edges;
    std::vector<int> edge_half_edge;
    std::vector<int> vertex_half_edge;
    std::vector<std::vector<int>> boundary_cycles;
    std::vector<std::string> vertex_labels, face_labels;

    int num_half_edges() const { return static_cast<int>(origin.size()); }
    int num_edges() const { return static_cast<int>(edge_half_edge.size()); }
    int num_faces() const { return static_cast<int>(face_half_edges.size()); }
    int euler_characteristic() const { return num_vertices - num_edges() + num_faces(); }
    int boundary_components() const { return static_cast<int>(boundary_cycles.size()); }
    int genus() const { return (2 - boundary_components() - euler_characteristic()) / 2; }
    bool closed() const { return boundary_cycles.empty(); }

    int head(int h) const { return origin[next[h]]; }
    bool on_boundary(int h) const { return twin[h] == kNone; }

    // Next outgoing half-edge clockwise around the origin, or kNone at the boundary.
    int rotate_cw(int h) const { return twin[h] == kNone ? kNone : next[twin[h]]; }
    // Next outgoing half-edge counterclockwise around the origin.
    int rotate_ccw(int h) const { return twin[prev[h]]; }

    std::pair<int, int> edge_vertices(int e) const {
        int h = edge_half_edge[e];
        return {origin[h], head(h)};
    }

    // Outgoing half-edges of v in counterclockwise order; for boundary
    // vertices starts at the outgoing boundary half-edge.
    std::vector<int> outgoing(int v) const {
        int start = vertex_half_edge[v];
        int h = start;
        while (twin[h] != kNone) {
            h = next[twin[h]];
            if (h == start) break;
        }
        std::vector<int> out;
        int g = h;
        do {
            out.push_back(g);
            int p = prev[g];
            if (twin[p] == kNone) break;
            g = twin[p];
        } while (g != h);
        return out;
    }

    int degree(int v) const { return static_cast<int>(outgoing(v).size()) + (boundary_vertex(v) ? 1 : 0); }

    bool boundary_vertex(int v) const {
        for (int h : outgoing(v))
            if (twin[h] == kNone || twin[prev[h]] == kNone) return true;
        return false;
    }
};

namespace detail {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace detail

struct SurfaceDeclaration {
    int genus = 0;
    int boundary_components = 0;
};

inline CellComplex build_complex(int num_vertices, std::vector<int> origin, std::vector<int> next,
                                 std::vector<int> twin, std::optional<SurfaceDeclaration> declared = std::nullopt) {
    const int H = static_cast<int>(origin.size());
    if (static_cast<int>(next.size()) != H || static_cast<int>(twin.size()) != H)
        throw Error("MalformedComplex", "origin, next and twin must have equal length");
    if (H == 0) throw Error("MalformedComplex", "no half-edges");
    for (int h = 0; h < H; ++h) {
        if (origin[h] < 0 || origin[h] >= num_vertices)
            throw Error("MalformedComplex", "origin out of range", {{"half_edge", h}});
        if (next[h] < 0 || next[h] >= H) throw Error("MalformedNext", "next out of range", {{"half_edge", h}});
        if (twin[h] != kNone && (twin[h] < 0 || twin[h] >= H))
            throw Error("MalformedTwin", "twin out of range", {{"half_edge", h}});
    }
    std::vector<int> prev(H, kNone);
    for (int h = 0; h < H; ++h) {
        if (prev[next[h]] != kNone) throw Error("MalformedNext", "next is not a permutation", {{"half_edge", next[h]}});
        prev[next[h]] = h;
    }
    for (int h = 0; h < H; ++h) {
        int t = twin[h];
        if (t == kNone) continue;
        if (t == h) throw Error("MalformedTwin", "half-edge is its own twin", {{"half_edge", h}});
        if (twin[t] != h) throw Error("MalformedTwin", "twin is not an involution", {{"half_edge", h}});
        int hh = origin[next[h]], th = origin[next[t]];
        if (origin[t] == hh && th == origin[h]) continue;
        if (origin[t] == origin[h] && th == hh)
            throw Error("NonOrientable", "twin pair runs in the same direction", {{"half_edge", h}});
        throw Error("MalformedTwin", "twin endpoints do not match", {{"half_edge", h}});
    }
    detail::UnionFind uf(H);
    for (int h = 0; h < H; ++h) {
        uf.unite(h, next[h]);
        if (twin[h] != kNone) uf.unite(h, twin[h]);
    }
    for (int h = 1; h < H; ++h)
        if (uf.find(h) != uf.find(0)) throw Error("Disconnected", "complex is not connected", {{"half_edge", h}});

    CellComplex c;
    c.num_vertices = num_vertices;
    c.origin = std::move(origin);
    c.next = std::move(next);
    c.twin = std::move(twin);
    c.prev = std::move(prev);

    c.vertex_half_edge.assign(num_vertices, kNone);
    for (int h = H - 1; h >= 0; --h) c.vertex_half_edge[c.origin[h]] = h;
    for (int v = 0; v < num_vertices; ++v)
        if (c.vertex_half_edge[v] == kNone) throw Error("MalformedComplex", "vertex without half-edges", {{"vertex", v}});

    // Each vertex must be a single disk or half-disk fan.
    detail::UnionFind fan(H);
    for (int h = 0; h < H; ++h)
        if (c.twin[h] != kNone) fan.unite(h, c.next[c.twin[h]]);
    std::vector<int> fan_root(num_vertices, kNone);
    for (int h = 0; h < H; ++h) {
        int v = c.origin[h];
        int r = fan.find(h);
        if (fan_root[v] == kNone)
            fan_root[v] = r;
        else if (fan_root[v] != r)
            throw Error("PinchedVertex", "vertex neighbourhood is not a disk", {{"vertex", v}});
    }

    c.face_of.assign(H, kNone);
    for (int h = 0; h < H; ++h) {
        if (c.face_of[h] != kNone) continue;
        int f = c.num_faces();
        std::vector<int> orbit;
        int g = h;
        do {
            c.face_of[g] = f;
            orbit.push_back(g);
            g = c.next[g];
        } while (g != h);
        c.face_half_edges.push_back(orbit);
    }
    c.edge_of.assign(H, kNone);
    for (int h = 0; h < H; ++h) {
        if (c.edge_of[h] != kNone) continue;
        int e = c.num_edges();
        c.edge_of[h] = e;
        if (c.twin[h] != kNone) c.edge_of[c.twin[h]] = e;
        c.edge_half_edge.push_back(h);
    }
    std::vector<bool> seen(H, false);
    for (int h = 0; h < H; ++h) {
        if (c.twin[h] != kNone || seen[h]) continue;
        std::vector<int> cyc;
        int b = h;
        do {
            seen[b] = true;
            cyc.push_back(b);
            int g = c.next[b];
            while (c.twin[g] != kNone) g = c.next[c.twin[g]];
            b = g;
        } while (b != h);
        c.boundary_cycles.push_back(cyc);
    }
    if ((2 - c.boundary_components() - c.euler_characteristic()) % 2 != 0)
        throw Error("MalformedComplex", "Euler characteristic parity is inconsistent");
    if (declared && (declared->genus != c.genus() || declared->boundary_components != c.boundary_components())) {
        throw Error("EulerMismatch", "declared surface does not match the complex",
                    {{"declared_genus", declared->genus},
                     {"declared_boundary_components", declared->boundary_components},
                     {"genus", c.genus()},
                     {"boundary_components", c.boundary_components()},
                     {"euler_characteristic", c.euler_characteristic()}});
    }
    return c;
}

// Polygon description: each face lists (vertex, edge label) pairs, the
// half-edge leaving that vertex along the labelled edge. Labels occurring
// twice are glued; labels occurring once lie on the boundary.
using FaceWord = std::vector<std::pair<int, int>>;

inline CellComplex complex_from_faces(int num_vertices, const std::vector<FaceWord>& faces,
                                      std::optional<SurfaceDeclaration> declared = std::nullopt) {
    std::vector<int> origin, next, twin;
    std::map<int, std::vector<int>> by_label;
    for (const auto& f : faces) {
        int base = static_cast<int>(origin.size());
        int k = static_cast<int>(f.size());
        for (int i = 0; i < k; ++i) {
            origin.push_back(f[i].first);
            next.push_back(base + (i + 1) % k);
            twin.push_back(kNone);
            by_label[f[i].second].push_back(base + i);
        }
    }
    for (const auto& [label, hs] : by_label) {
        if (hs.size() > 2) throw Error("MalformedTwin", "edge label used more than twice", {{"label", label}});
        if (hs.size() == 2) {
            twin[hs[0]] = hs[1];
            twin[hs[1]] = hs[0];
        }
    }
    return build_complex(num_vertices, std::move(origin), std::move(next), std::move(twin), declared);
}

inline CellComplex dual(const CellComplex& g) {
    if (!g.closed()) throw Error("HasBoundary", "dual requires a closed surface", {{"boundary_components", g.boundary_components()}});
    const int H = g.num_half_edges();
    std::vector<int> origin(H), next(H), twin(H);
    for (int h = 0; h < H; ++h) {
        origin[h] = g.face_of[g.twin[h]];
        next[h] = g.twin[g.prev[h]];
        twin[h] = g.twin[h];
    }
    return build_complex(g.num_faces(), std::move(origin), std::move(next), std::move(twin));
}

// Orientation-preserving isomorphism of rotation systems, as a half-edge map.
inline std::optional<std::vector<int>> find_isomorphism(const CellComplex& a, const CellComplex& b) {
    const int H = a.num_half_edges();
    if (H != b.num_half_edges() || a.num_vertices != b.num_vertices || a.num_faces() != b.num_faces()) return std::nullopt;
    for (int target = 0; target < H; ++target) {
        std::vector<int> m(H, kNone), inv(H, kNone);
        std::vector<int> stack{0};
        m[0] = target;
        inv[target] = 0;
        bool ok = true;
        auto assign = [&](int x, int y) {
            if (x == kNone || y == kNone) return (x == kNone) == (y == kNone);
            if (m[x] == kNone && inv[y] == kNone) {
                m[x] = y;
                inv[y] = x;
                stack.push_back(x);
                return true;
            }
            return m[x] == y;
        };
        while (ok && !stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ok = assign(a.next[x], b.next[m[x]]) && assign(a.twin[x], b.twin[m[x]]);
        }
        if (ok && std::find(m.begin(), m.end(), kNone) == m.end()) return m;
    }
    return std::nullopt;
}

// Extended graph of a complex with boundary: one boundary vertex g per
// boundary vertex C of the complex, boundary edges joining consecutive g's,
// one spoke C -- g, and one collar face per boundary edge of the complex.
// Cells of the base keep their ids; new cells are appended.
struct ExtendedComplex {
    CellComplex base;
    CellComplex ext;
    std::vector<int> boundary_vertices;  // ext vertex ids
    std::vector<int> boundary_edges;     // ext edge ids, g_i g_{i+1}
    std::vector<int> spoke_edges;        // ext edge ids, C_i g_i
    std::vector<int> collar_faces;       // ext face ids
    std::vector<int> spoke_base_vertex;  // per boundary vertex: C_i
    // Per base boundary half-edge b_i (C_i -> C_{i+1}): indices into the
    // arrays above for its collar face, boundary edge and the spokes at
    // C_i and C_{i+1}.
    struct Collar {
        int base_half_edge;
        int face;
        int boundary_edge;
        int spoke_start;
        int spoke_end;
    };
    std::vector<Collar> collars;

    bool is_spoke(int e) const { return std::find(spoke_edges.begin(), spoke_edges.end(), e) != spoke_edges.end(); }
    bool is_boundary_edge(int e) const {
        return std::find(boundary_edges.begin(), boundary_edges.end(), e) != boundary_edges.end();
    }
};

inline ExtendedComplex extended_graph(const CellComplex& g) {
    if (g.closed()) throw Error("NoBoundary", "extended graph requires a surface with boundary");
    const int H = g.num_half_edges();
    std::vector<int> origin = g.origin, next = g.next, twin = g.twin;
    int nv = g.num_vertices;
    // Boundary vertex g_i for each boundary half-edge b_i, named by its origin.
    std::map<int, int> gvertex;  // base boundary half-edge -> new vertex
    std::map<int, int> succ;     // boundary successor
    for (const auto& cyc : g.boundary_cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            gvertex[cyc[i]] = nv++;
            succ[cyc[i]] = cyc[(i + 1) % cyc.size()];
        }
    }
    // Four half-edges per boundary half-edge: t (reverse of b), spoke out of
    // C_i, boundary edge, spoke into C_{i+1}.
    std::map<int, int> block;
    int nh = H;
    for (const auto& [b, gv] : gvertex) {
        block[b] = nh;
        nh += 4;
    }
    origin.resize(nh);
    next.resize(nh);
    twin.resize(nh);
    for (const auto& [b, gv] : gvertex) {
        int s = block[b];
        int b2 = succ[b];
        int ci = g.origin[b], cj = g.head(b);
        origin[s] = cj;
        origin[s + 1] = ci;
        origin[s + 2] = gv;
        origin[s + 3] = gvertex[b2];
        next[s] = s + 1;
        next[s + 1] = s + 2;
        next[s + 2] = s + 3;
        next[s + 3] = s;
        twin[s] = b;
        twin[b] = s;
        twin[s + 2] = kNone;
        twin[s + 3] = block[b2] + 1;
        twin[block[b2] + 1] = s + 3;
    }
    ExtendedComplex x;
    x.base = g;
    x.ext = build_complex(nv, std::move(origin), std::move(next), std::move(twin));
    x.ext.vertex_labels = g.vertex_labels;
    x.ext.face_labels = g.face_labels;
    for (int v = g.num_vertices; v < nv; ++v) x.boundary_vertices.push_back(v);
    x.spoke_base_vertex.assign(x.boundary_vertices.size(), kNone);
    for (const auto& [b, gv] : gvertex) {
        int s = block[b];
        ExtendedComplex::Collar col;
        col.base_half_edge = b;
        col.face = x.ext.face_of[s];
        col.boundary_edge = x.ext.edge_of[s + 2];
        col.spoke_start = x.ext.edge_of[s + 1];
        col.spoke_end = x.ext.edge_of[s + 3];
        x.collars.push_back(col);
        x.collar_faces.push_back(col.face);
        x.boundary_edges.push_back(col.boundary_edge);
        x.spoke_edges.push_back(col.spoke_start);
        x.spoke_base_vertex[gv - g.num_vertices] = g.origin[b];
    }
    std::sort(x.collar_faces.begin(), x.collar_faces.end());
    std::sort(x.boundary_edges.begin(), x.boundary_edges.end());
    std::sort(x.spoke_edges.begin(), x.spoke_edges.end());
    return x;
}

// Orientation-reversing involution of a doubled complex.
struct Involution {
    std::vector<int> vertex;
    std::vector<int> half_edge;
};

inline bool is_reflection(const CellComplex& c, const Involution& iota) {
    const int H = c.num_half_edges();
    if (static_cast<int>(iota.half_edge.size()) != H || static_cast<int>(iota.vertex.size()) != c.num_vertices) return false;
    for (int v = 0; v < c.num_vertices; ++v)
        if (iota.vertex[iota.vertex[v]] != v) return false;
    for (int h = 0; h < H; ++h) {
        int j = iota.half_edge[h];
        if (iota.half_edge[j] != h) return false;
        if (c.origin[j] != iota.vertex[c.head(h)]) return false;
        if (iota.half_edge[c.next[h]] != c.prev[j]) return false;
        int t = c.twin[h];
        if ((t == kNone) != (c.twin[j] == kNone)) return false;
        if (t != kNone && iota.half_edge[t] != c.twin[j]) return false;
    }
    return true;
}

struct DoubledComplex {
    CellComplex complex;
    Involution involution;
    std::vector<int> edge_plus, edge_minus;  // base edge -> doubled edges
    std::vector<int> face_plus, face_minus;  // base face -> doubled faces
    std::vector<int> spoke_edge;             // ext spoke edge id -> doubled edge (kNone elsewhere)
    std::vector<int> collar_face;            // ext collar face id -> doubled face (kNone elsewhere)
};

inline DoubledComplex double_complex(const ExtendedComplex& x) {
    const CellComplex& g = x.base;
    const int H = g.num_half_edges();
    const int V = g.num_vertices;
    int nh = 2 * H + 4 * static_cast<int>(x.collars.size());
    std::vector<int> origin(nh), next(nh), twin(nh, kNone);
    for (int h = 0; h < H; ++h) {
        origin[h] = g.origin[h];
        next[h] = g.next[h];
        twin[h] = g.twin[h];
        origin[H + h] = g.head(h) + V;
        next[H + h] = H + g.prev[h];
        twin[H + h] = g.twin[h] == kNone ? kNone : H + g.twin[h];
    }
    std::map<int, int> block;
    for (std::size_t i = 0; i < x.collars.size(); ++i) block[x.collars[i].base_half_edge] = 2 * H + 4 * static_cast<int>(i);
    std::map<int, int> succ;
    for (const auto& cyc : g.boundary_cycles)
        for (std::size_t i = 0; i < cyc.size(); ++i) succ[cyc[i]] = cyc[(i + 1) % cyc.size()];
    std::map<int, int> pred;
    for (const auto& [a, b] : succ) pred[b] = a;
    for (const auto& col : x.collars) {
        int b = col.base_half_edge;
        int s = block[b];
        int ci = g.origin[b], cj = g.head(b);
        origin[s] = cj;          // t+ : C_{i+1}+ -> C_i+
        origin[s + 1] = ci;      // spoke C_i+ -> C_i-
        origin[s + 2] = ci + V;  // t- : C_i- -> C_{i+1}-
        origin[s + 3] = cj + V;  // spoke C_{i+1}- -> C_{i+1}+
        next[s] = s + 1;
        next[s + 1] = s + 2;
        next[s + 2] = s + 3;
        next[s + 3] = s;
        twin[s] = b;
        twin[b] = s;
        twin[s + 2] = H + b;
        twin[H + b] = s + 2;
        twin[s + 3] = block[succ[b]] + 1;
        twin[block[succ[b]] + 1] = s + 3;
    }
    DoubledComplex d;
    d.complex = build_complex(2 * V, std::move(origin), std::move(next), std::move(twin));
    d.involution.vertex.resize(2 * V);
    for (int v = 0; v < V; ++v) {
        d.involution.vertex[v] = v + V;
        d.involution.vertex[v + V] = v;
    }
    d.involution.half_edge.resize(nh);
    for (int h = 0; h < H; ++h) {
        d.involution.half_edge[h] = H + h;
        d.involution.half_edge[H + h] = h;
    }
    for (const auto& col : x.collars) {
        int s = block[col.base_half_edge];
        d.involution.half_edge[s] = s + 2;
        d.involution.half_edge[s + 2] = s;
        d.involution.half_edge[s + 1] = s + 1;
        d.involution.half_edge[s + 3] = s + 3;
    }
    const CellComplex& D = d.complex;
    d.edge_plus.resize(g.num_edges());
    d.edge_minus.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        int h = g.edge_half_edge[e];
        d.edge_plus[e] = D.edge_of[h];
        d.edge_minus[e] = D.edge_of[H + h];
    }
    d.face_plus.resize(g.num_faces());
    d.face_minus.resize(g.num_faces());
    for (int f = 0; f < g.num_faces(); ++f) {
        int h = g.face_half_edges[f][0];
        d.face_plus[f] = D.face_of[h];
        d.face_minus[f] = D.face_of[H + h];
    }
    d.spoke_edge.assign(x.ext.num_edges(), kNone);
    d.collar_face.assign(x.ext.num_faces(), kNone);
    for (const auto& col : x.collars) {
        int s = block[col.base_half_edge];
        d.spoke_edge[col.spoke_start] = D.edge_of[s + 1];
        d.collar_face[col.face] = D.face_of[s];
    }
    d.complex.vertex_labels.resize(2 * V);
    for (int v = 0; v < V; ++v) {
        std::string base = v < static_cast<int>(g.vertex_labels.size()) ? g.vertex_labels[v] : std::to_string(v);
        d.complex.vertex_labels[v] = base + "+";
        d.complex.vertex_labels[v + V] = base + "-";
    }
    return d;
}

}  // namespace hyperpat
