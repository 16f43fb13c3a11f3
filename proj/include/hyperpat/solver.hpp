// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/conditions.hpp"
#include "hyperpat/volume.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace hyperpat {

inline int default_workers() {
    if (const char* env = std::getenv("HYPERPAT_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

// Runs body(i) for i in [0, n) on up to `workers` threads. Results must be
// written to per-index slots so that reductions stay deterministic.
inline void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

enum class EdgeKind : std::uint8_t { vertical, horizontal, diagonal };

inline std::string edge_kind_name(EdgeKind k) {
    switch (k) {
    case EdgeKind::vertical: return "vertical";
    case EdgeKind::horizontal: return "horizontal";
    case EdgeKind::diagonal: return "diagonal";
    }
    return "";
}

struct EdgeClass {
    EdgeKind kind = EdgeKind::vertical;
    int id = 0;  // face, edge of the complex, or pyramid
    std::vector<std::pair<int, int>> incidence;  // (tet, slot)
};

// Local vertex 0 is the central vertex; 1..3 are base corners in
// counterclockwise order around the pyramid's vertex.
struct TetCell {
    int pyramid = 0;
    std::array<int, 4> corner{-1, -1, -1, -1};
    std::array<int, 4> face{-1, -1, -1, -1};
    std::array<VertexType, 4> types{};
    std::array<int, 6> edge_class{};
};

struct Pyramid {
    int vertex = 0;
    std::vector<int> faces;  // base corners, counterclockwise
    std::vector<int> sides;  // edge of the complex between corner k and k + 1
    std::vector<int> side_half_edges;  // outgoing half-edge whose edge is sides[k]
    int fan_base = 0;
    std::vector<int> tets;
};

struct TetComplex {
    Geometry geometry = Geometry::euclidean;
    int num_faces = 0;
    int num_edges = 0;
    std::vector<bool> face_ideal;
    std::vector<int> ideal_faces;
    std::vector<Pyramid> pyramids;
    std::vector<TetCell> tets;
    std::vector<EdgeClass> edges;
    std::vector<int> vertical_class;    // per face
    std::vector<int> horizontal_class;  // per edge of the complex
};

inline TetComplex build_tet_complex(const CellComplex& c, const std::vector<int>& ideal_faces, Geometry g,
                                    int fan_rotation = 0) {
    if (!c.closed()) throw Error("HasBoundary", "the cone complex needs a closed surface");
    for (int v = 0; v < c.num_vertices; ++v)
        if (c.degree(v) < 3) throw Error("DegreeTooLow", "vertex of degree below three", {{"vertex", v}, {"degree", c.degree(v)}});
    TetComplex tc;
    tc.geometry = g;
    tc.num_faces = c.num_faces();
    tc.num_edges = c.num_edges();
    tc.face_ideal.assign(c.num_faces(), false);
    for (int f : ideal_faces) tc.face_ideal.at(f) = true;
    tc.ideal_faces = ideal_faces;
    std::sort(tc.ideal_faces.begin(), tc.ideal_faces.end());
    for (int f = 0; f < c.num_faces(); ++f) {
        tc.vertical_class.push_back(static_cast<int>(tc.edges.size()));
        tc.edges.push_back({EdgeKind::vertical, f, {}});
    }
    for (int e = 0; e < c.num_edges(); ++e) {
        tc.horizontal_class.push_back(static_cast<int>(tc.edges.size()));
        tc.edges.push_back({EdgeKind::horizontal, e, {}});
    }
    for (int v = 0; v < c.num_vertices; ++v) {
        Pyramid p;
        p.vertex = v;
        auto out = c.outgoing(v);
        const int d = static_cast<int>(out.size());
        for (int k = 0; k < d; ++k) {
            p.faces.push_back(c.face_of[out[k]]);
            p.sides.push_back(c.edge_of[out[(k + 1) % d]]);
            p.side_half_edges.push_back(out[(k + 1) % d]);
        }
        int low = static_cast<int>(std::min_element(p.faces.begin(), p.faces.end()) - p.faces.begin());
        p.fan_base = ((low + fan_rotation) % d + d) % d;
        const int pid = static_cast<int>(tc.pyramids.size());
        std::map<std::pair<int, int>, int> diag;
        auto horizontal = [&](int a, int b) {
            if ((a + 1) % d == b) return tc.horizontal_class[p.sides[a]];
            if ((b + 1) % d == a) return tc.horizontal_class[p.sides[b]];
            auto key = std::minmax(a, b);
            auto it = diag.find(key);
            if (it != diag.end()) return it->second;
            int id = static_cast<int>(tc.edges.size());
            tc.edges.push_back({EdgeKind::diagonal, pid, {}});
            diag[key] = id;
            return id;
        };
        for (int j = 1; j + 1 < d; ++j) {
            TetCell t;
            t.pyramid = pid;
            t.corner = {-1, p.fan_base, (p.fan_base + j) % d, (p.fan_base + j + 1) % d};
            t.types[0] = g == Geometry::euclidean ? VertexType::ideal : VertexType::hyperideal;
            for (int i = 1; i < 4; ++i) {
                t.face[i] = p.faces[t.corner[i]];
                t.types[i] = tc.face_ideal[t.face[i]] ? VertexType::ideal : VertexType::hyperideal;
            }
            const int tid = static_cast<int>(tc.tets.size());
            for (int s = 0; s < 6; ++s) {
                int a = kEdgeVertices[s][0], b = kEdgeVertices[s][1];
                int cls = a == 0 ? tc.vertical_class[t.face[b]] : horizontal(t.corner[a], t.corner[b]);
                t.edge_class[s] = cls;
                tc.edges[cls].incidence.emplace_back(tid, s);
            }
            p.tets.push_back(tid);
            tc.tets.push_back(t);
        }
        tc.pyramids.push_back(p);
    }
    return tc;
}

// Target interior angle sums per edge class.
inline std::vector<double> target_edge_sums(const TetComplex& tc, const ConditionInstance& data,
                                            const Verdict& verdict) {
    if (!verdict.accepted) throw Error("MismatchedIdealSet", "angle data was rejected", {{"reason", verdict.reason}});
    if (verdict.ideal_faces != tc.ideal_faces)
        throw Error("MismatchedIdealSet", "ideal faces differ from the accepted verdict",
                    {{"complex", tc.ideal_faces}, {"verdict", verdict.ideal_faces}});
    std::vector<double> t(tc.edges.size());
    for (std::size_t i = 0; i < tc.edges.size(); ++i) {
        const auto& e = tc.edges[i];
        switch (e.kind) {
        case EdgeKind::vertical: t[i] = 2.0 * kPi - data.kappa.at(e.id).value; break;
        case EdgeKind::horizontal: t[i] = kPi - data.theta.at(e.id).value; break;
        case EdgeKind::diagonal: t[i] = kPi; break;
        }
    }
    return t;
}

struct SolverOptions {
    double tol_grad = 1e-9;
    double tol_len = 1e-7;
    int max_iter = 200;
    std::uint64_t seed = 0;
    bool random_start = false;
    int workers = default_workers();
    double fd_step = 1e-5;
};

struct TetState {
    Tet tet;
    std::array<double, 6> lengths{};
    double volume = 0.0;
};

struct Solution {
    std::vector<std::array<double, 6>> angles;
    std::vector<TetState> tets;
    std::vector<double> apex_shift;     // per tet, euclidean horosphere matching
    std::vector<double> class_length;   // per edge class, matched length
    double volume = 0.0;
    double grad_norm = 0.0;
    double length_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string status;
    Json trace = Json::array();
    Json boundary = Json::object();  // proximity of the final iterate to the polytope boundary
};

class Solver {
public:
    using Vec = Eigen::VectorXd;
    using Mat = Eigen::MatrixXd;

    Solver(const TetComplex& tc, std::vector<double> targets, SolverOptions opt = {})
        : tc_(tc), targets_(std::move(targets)), opt_(opt) {
        T_ = static_cast<int>(tc_.tets.size());
        N_ = 6 * T_;
        build_constraints();
        build_slacks();
    }

    int num_vars() const { return N_; }
    int reduced_dim() const { return static_cast<int>(Z_.cols()); }
    const Mat& null_space() const { return Z_; }
    const Mat& constraints() const { return C_; }
    const Vec& rhs() const { return b_; }

    Vec from_reduced(const Vec& y) const { return xp_ + Z_ * y; }
    Vec to_reduced(const Vec& x) const { return Z_.transpose() * (x - xp_); }

    std::array<double, 6> tet_angles(const Vec& x, int t) const {
        std::array<double, 6> a{};
        for (int s = 0; s < 6; ++s) a[s] = x[6 * t + s];
        return a;
    }

    Tet realize(const Vec& x, int t) const {
        Tet tet = tet_from_angles(tet_angles(x, t), tc_.tets[t].types);
        tet.horo = tc_.geometry == Geometry::euclidean ? HoroConvention::euclidean_apex : HoroConvention::hyperbolic_apex;
        return tet;
    }

    // Min linear slack; positive iff strictly inside the linear polytope.
    double linear_margin(const Vec& x) const { return (A_ * x + a0_).minCoeff(); }

    std::optional<std::vector<TetState>> evaluate(const Vec& x, bool with_volume = true) const {
        if (!(linear_margin(x) > 0.0)) return std::nullopt;
        std::vector<std::optional<TetState>> out(T_);
        parallel_for(T_, opt_.workers, [&](int t) {
            try {
                TetState s;
                s.tet = realize(x, t);
                s.lengths = edge_lengths(s.tet);
                if (with_volume) s.volume = truncated_volume(s.tet);
                out[t] = s;
            } catch (const Error&) {
            }
        });
        std::vector<TetState> res;
        for (auto& s : out) {
            if (!s) return std::nullopt;
            res.push_back(*s);
        }
        return res;
    }

    double total_volume(const Vec& x) const {
        auto ev = evaluate(x);
        if (!ev) throw Error("InfeasibleAngles", "angle assignment is not feasible");
        double v = 0.0;
        for (const auto& s : *ev) v += s.volume;
        return v;
    }

    // Gradient with respect to interior angles: minus half the edge lengths.
    Vec volume_gradient(const std::vector<TetState>& st) const {
        Vec g(N_);
        for (int t = 0; t < T_; ++t)
            for (int s = 0; s < 6; ++s) g[6 * t + s] = -0.5 * st[t].lengths[s];
        return g;
    }

    Vec volume_gradient(const Vec& x) const {
        auto ev = evaluate(x, false);
        if (!ev) throw Error("InfeasibleAngles", "angle assignment is not feasible");
        return volume_gradient(*ev);
    }

    // Hessian of the volume restricted to each tetrahedron's ideal-link
    // constraint space, by central differences of the length vector.
    Mat volume_hessian(const Vec& x) const {
        Mat H = Mat::Zero(N_, N_);
        std::vector<Eigen::Matrix<double, 6, 6>> blocks(T_);
        parallel_for(T_, opt_.workers, [&](int t) {
            const Mat& Zt = tet_null_[t];
            const int r = static_cast<int>(Zt.cols());
            Mat J(6, r);
            auto base = tet_angles(x, t);
            double h = opt_.fd_step;
            for (int k = 0; k < r; ++k) {
                std::array<double, 6> ap = base, am = base;
                for (int s = 0; s < 6; ++s) {
                    ap[s] += h * Zt(s, k);
                    am[s] -= h * Zt(s, k);
                }
                Tet tp = tet_from_angles(ap, tc_.tets[t].types);
                Tet tm = tet_from_angles(am, tc_.tets[t].types);
                auto lp = edge_lengths(tp), lm = edge_lengths(tm);
                for (int s = 0; s < 6; ++s) J(s, k) = (lp[s] - lm[s]) / (2.0 * h);
            }
            Mat Hh = -0.5 * Zt.transpose() * J;
            Hh = 0.5 * (Hh + Hh.transpose()).eval();
            blocks[t] = Zt * Hh * Zt.transpose();
        });
        for (int t = 0; t < T_; ++t) H.block(6 * t, 6 * t, 6, 6) = blocks[t];
        return H;
    }

    // Strictly feasible start: maximal margin point of the linear polytope,
    // then its analytic center.
    Vec initial_point() const {
        const int n = reduced_dim();
        Mat G = A_ * Z_;
        Vec h = A_ * xp_ + a0_;
        if (n == 0) {
            if (!(h.minCoeff() > 0.0)) no_interior(xp_);
            return xp_;
        }
        // Phase I: maximize t subject to G y + h >= t.
        Vec z = Vec::Zero(n + 1);
        z[n] = h.minCoeff() - 1.0;
        Mat Gt(G.rows(), n + 1);
        Gt << G, -Vec::Ones(G.rows());
        Vec c = Vec::Zero(n + 1);
        c[n] = 1.0;
        for (double mu = 1.0; mu > 1e-9; mu *= 0.2) {
            z = barrier_newton(Gt, h, c, mu, z, 50);
            if (z[n] > 0.05) break;
        }
        if (!(z[n] > 1e-9)) no_interior(from_reduced(z.head(n)));
        Vec y = z.head(n);
        y = barrier_newton(G, h, Vec::Zero(n), 1.0, y, 100);
        Vec x = from_reduced(y);
        if (!evaluate(x, false)) no_interior(x);
        return x;
    }

    // Hit-and-run sample of the linear polytope from the analytic center,
    // retried until every tetrahedron is realizable.
    Vec random_point(std::uint64_t seed, int steps = 40) const {
        Vec center = initial_point();
        const int n = reduced_dim();
        if (n == 0) return center;
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Mat G = A_ * Z_;
        for (int attempt = 0; attempt < 100; ++attempt) {
            Vec y = to_reduced(center);
            for (int s = 0; s < steps; ++s) {
                Vec u(n);
                for (int i = 0; i < n; ++i) u[i] = normal(rng);
                u.normalize();
                Vec slack = G * y + (A_ * xp_ + a0_);
                Vec rate = G * u;
                double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
                for (int i = 0; i < slack.size(); ++i) {
                    if (rate[i] > 1e-15) lo = std::max(lo, -slack[i] / rate[i]);
                    if (rate[i] < -1e-15) hi = std::min(hi, -slack[i] / rate[i]);
                }
                double a = lo + (hi - lo) * (0.02 + 0.96 * unif(rng));
                y += a * u;
            }
            Vec x = from_reduced(y);
            if (evaluate(x, false)) return x;
        }
        return center;
    }

    Solution maximize(const Vec& x0) const;

    // Smallest linear slacks at x and the shortest matched edge class.
    Json boundary_report(const Vec& x, const std::vector<double>& class_length, int count = 5) const {
        Vec sl = A_ * x + a0_;
        std::vector<int> order(sl.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sl[a] < sl[b]; });
        Json tight = Json::array();
        for (int i = 0; i < std::min<int>(count, static_cast<int>(order.size())); ++i)
            tight.push_back({{"constraint", slack_names_[order[i]]}, {"slack", sl[order[i]]}});
        Json j = {{"margin", sl.size() ? sl.minCoeff() : 0.0}, {"tightest", tight}};
        if (!class_length.empty()) {
            auto it = std::min_element(class_length.begin(), class_length.end());
            j["shortest_edge_class"] = {{"class", it - class_length.begin()},
                                        {"kind", edge_kind_name(tc_.edges[it - class_length.begin()].kind)},
                                        {"length", *it}};
        }
        return j;
    }

    // Matched edge lengths: euclidean tetrahedra get one apex horosphere
    // shift each (least squares, tet 0 fixed); hyperbolic lengths are
    // canonical. Returns the maximal spread within an edge class.
    double length_residual(const std::vector<TetState>& st, std::vector<double>* shifts = nullptr,
                           std::vector<double>* class_len = nullptr) const {
        const int K = static_cast<int>(tc_.edges.size());
        std::vector<double> s(T_, 0.0);
        auto coef = [&](int t, int slot) {
            if (tc_.geometry != Geometry::euclidean) return 0.0;
            int a = kEdgeVertices[slot][0], b = kEdgeVertices[slot][1];
            const auto& ty = tc_.tets[t].types;
            if (a == 0) return ty[b] == VertexType::ideal ? 0.0 : 1.0;
            return -static_cast<double>((ty[a] == VertexType::ideal) + (ty[b] == VertexType::ideal));
        };
        if (tc_.geometry == Geometry::euclidean && T_ > 1) {
            int rows = 0;
            for (const auto& e : tc_.edges) rows += static_cast<int>(e.incidence.size());
            Mat M = Mat::Zero(rows + 1, T_ + K);
            Vec r = Vec::Zero(rows + 1);
            int i = 0;
            for (int k = 0; k < K; ++k)
                for (auto [t, slot] : tc_.edges[k].incidence) {
                    M(i, t) = coef(t, slot);
                    M(i, T_ + k) = -1.0;
                    r[i] = -st[t].lengths[slot];
                    ++i;
                }
            M(rows, 0) = 1.0;
            Vec sol = M.completeOrthogonalDecomposition().solve(r);
            for (int t = 0; t < T_; ++t) s[t] = sol[t];
        }
        double worst = 0.0;
        if (class_len) class_len->assign(K, 0.0);
        for (int k = 0; k < K; ++k) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
            for (auto [t, slot] : tc_.edges[k].incidence) {
                double l = st[t].lengths[slot] + coef(t, slot) * s[t];
                lo = std::min(lo, l);
                hi = std::max(hi, l);
                sum += l;
            }
            if (!tc_.edges[k].incidence.empty()) worst = std::max(worst, hi - lo);
            if (class_len && !tc_.edges[k].incidence.empty())
                (*class_len)[k] = sum / static_cast<double>(tc_.edges[k].incidence.size());
        }
        if (shifts) *shifts = s;
        return worst;
    }

private:
    const TetComplex& tc_;
    std::vector<double> targets_;
    SolverOptions opt_;
    int T_ = 0;
    int N_ = 0;
    Mat C_;
    Vec b_;
    Mat Z_;
    Vec xp_;
    Mat A_;  // linear slacks A x + a0 > 0
    Vec a0_;
    std::vector<Mat> tet_null_;

    [[noreturn]] void no_interior(const Vec& x) const {
        Json tight = Json::array();
        Vec sl = A_ * x + a0_;
        double m = sl.minCoeff();
        for (int i = 0; i < sl.size(); ++i)
            if (sl[i] < m + 1e-9) tight.push_back(slack_names_[i]);
        throw Error("NoInteriorPoint", "no strictly feasible angle assignment found",
                    {{"margin", m}, {"tight_constraints", tight}});
    }

    std::vector<std::string> slack_names_;

    static Mat null_space_of(const Mat& M, int cols) {
        if (M.rows() == 0) return Mat::Identity(cols, cols);
        Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv[i] > tol) ++rank;
        return svd.matrixV().rightCols(cols - rank);
    }

    void build_constraints() {
        std::vector<Vec> rows;
        std::vector<double> rhs;
        for (std::size_t k = 0; k < tc_.edges.size(); ++k) {
            Vec r = Vec::Zero(N_);
            for (auto [t, slot] : tc_.edges[k].incidence) r[6 * t + slot] += 1.0;
            rows.push_back(r);
            rhs.push_back(targets_.at(k));
        }
        tet_null_.resize(T_);
        for (int t = 0; t < T_; ++t) {
            Mat local(0, 6);
            for (int v = 0; v < 4; ++v) {
                if (tc_.tets[t].types[v] != VertexType::ideal) continue;
                Vec r = Vec::Zero(N_);
                Eigen::Matrix<double, 1, 6> lr = Eigen::Matrix<double, 1, 6>::Zero();
                for (int s = 0; s < 6; ++s)
                    if (kEdgeVertices[s][0] == v || kEdgeVertices[s][1] == v) {
                        r[6 * t + s] = 1.0;
                        lr[s] = 1.0;
                    }
                rows.push_back(r);
                rhs.push_back(kPi);
                local.conservativeResize(local.rows() + 1, 6);
                local.row(local.rows() - 1) = lr;
            }
            tet_null_[t] = null_space_of(local, 6);
        }
        C_.resize(static_cast<int>(rows.size()), N_);
        b_.resize(static_cast<int>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            C_.row(static_cast<int>(i)) = rows[i].transpose();
            b_[static_cast<int>(i)] = rhs[i];
        }
        Z_ = null_space_of(C_, N_);
        xp_ = C_.completeOrthogonalDecomposition().solve(b_);
        double res = (C_ * xp_ - b_).lpNorm<Eigen::Infinity>();
        if (res > 1e-9) throw Error("NoInteriorPoint", "edge sum targets are inconsistent", {{"residual", res}});
    }

    void build_slacks() {
        std::vector<Vec> rows;
        std::vector<double> off;
        for (int t = 0; t < T_; ++t) {
            for (int s = 0; s < 6; ++s) {
                Vec r = Vec::Zero(N_);
                r[6 * t + s] = 1.0;
                rows.push_back(r);
                off.push_back(0.0);
                slack_names_.push_back("tet " + std::to_string(t) + " slot " + std::to_string(s) + " > 0");
                rows.push_back(-r);
                off.push_back(kPi);
                slack_names_.push_back("tet " + std::to_string(t) + " slot " + std::to_string(s) + " < pi");
            }
            for (int v = 0; v < 4; ++v) {
                if (tc_.tets[t].types[v] != VertexType::hyperideal) continue;
                Vec r = Vec::Zero(N_);
                for (int s = 0; s < 6; ++s)
                    if (kEdgeVertices[s][0] == v || kEdgeVertices[s][1] == v) r[6 * t + s] = -1.0;
                rows.push_back(r);
                off.push_back(kPi);
                slack_names_.push_back("tet " + std::to_string(t) + " vertex " + std::to_string(v) + " link < pi");
            }
        }
        A_.resize(static_cast<int>(rows.size()), N_);
        a0_.resize(static_cast<int>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            A_.row(static_cast<int>(i)) = rows[i].transpose();
            a0_[static_cast<int>(i)] = off[i];
        }
    }

    // Maximizes c.z + mu * sum log(G z + h) from a strictly feasible z.
    static Vec barrier_newton(const Mat& G, const Vec& h, const Vec& c, double mu, Vec z, int iters) {
        auto f = [&](const Vec& zz) {
            Vec s = G * zz + h;
            if (!(s.minCoeff() > 0.0)) return -std::numeric_limits<double>::infinity();
            return c.dot(zz) + mu * s.array().log().sum();
        };
        for (int it = 0; it < iters; ++it) {
            Vec s = G * z + h;
            Vec inv = s.cwiseInverse();
            Vec grad = c + mu * G.transpose() * inv;
            Mat Hn = mu * G.transpose() * inv.cwiseAbs2().asDiagonal() * G;
            Vec step = Hn.ldlt().solve(grad);
            double dec = grad.dot(step);
            if (!(dec > 1e-14)) break;
            double f0 = f(z), a = 1.0;
            while (a > 1e-12) {
                Vec zn = z + a * step;
                if (f(zn) >= f0 + 1e-4 * a * dec) {
                    z = zn;
                    break;
                }
                a *= 0.5;
            }
            if (a <= 1e-12) break;
        }
        return z;
    }
};

inline Solution Solver::maximize(const Vec& x0) const {
    Solution sol;
    Vec x = x0;
    auto st = evaluate(x);
    if (!st) throw Error("InfeasibleAngles", "starting point is not feasible");
    const int n = reduced_dim();
    auto volume_of = [](const std::vector<TetState>& s) {
        double v = 0.0;
        for (const auto& t : s) v += t.volume;
        return v;
    };
    auto barrier = [&](const Vec& xx) { return (A_ * xx + a0_).array().log().sum(); };
    double V = volume_of(*st);
    const double tol_g = opt_.tol_grad * std::sqrt(std::max(1.0, static_cast<double>(T_)));
    double mu = 1e-4;
    int iter = 0;
    auto finish = [&](const std::string& status, bool ok) {
        sol.angles.resize(T_);
        for (int t = 0; t < T_; ++t) sol.angles[t] = tet_angles(x, t);
        sol.tets = *st;
        sol.volume = V;
        sol.grad_norm = n ? (Z_.transpose() * volume_gradient(*st)).norm() : 0.0;
        sol.length_residual = length_residual(*st, &sol.apex_shift, &sol.class_length);
        sol.iterations = iter;
        sol.converged = ok;
        sol.status = status;
        sol.boundary = boundary_report(x, sol.class_length);
        return sol;
    };
    for (; iter <= opt_.max_iter; ++iter) {
        Vec g = volume_gradient(*st);
        double gn = n ? (Z_.transpose() * g).norm() : 0.0;
        double lr = length_residual(*st);
        if (gn < tol_g && lr < opt_.tol_len) return finish("converged", true);
        if (iter == opt_.max_iter) break;
        if (n == 0) return finish("converged", lr < opt_.tol_len);

        Vec sl = A_ * x + a0_;
        Vec bg = A_.transpose() * sl.cwiseInverse();
        Mat bH = -A_.transpose() * sl.cwiseInverse().cwiseAbs2().asDiagonal() * A_;
        Mat Hv = volume_hessian(x);
        std::string method = "newton";
        auto direction = [&](double m) -> std::optional<Vec> {
            Vec rg = Z_.transpose() * (g + m * bg);
            Mat rH = -(Z_.transpose() * (Hv + m * bH) * Z_);
            rH = 0.5 * (rH + rH.transpose()).eval();
            Eigen::LLT<Mat> llt(rH);
            if (llt.info() != Eigen::Success) return std::nullopt;
            return Vec(Z_ * llt.solve(rg));
        };
        auto objective = [&](const Vec& xx, double vol, double m) { return vol + (m > 0.0 ? m * barrier(xx) : 0.0); };
        auto try_step = [&](const Vec& dir, double m) -> bool {
            double slope = (g + m * bg).dot(dir);
            if (!(slope > 0.0)) return false;
            double f0 = objective(x, V, m);
            for (double a = 1.0; a > 1e-10; a *= 0.5) {
                Vec xn = x + a * dir;
                auto sn = evaluate(xn);
                if (!sn) continue;
                double Vn = volume_of(*sn);
                double fn = objective(xn, Vn, m);
                bool tiny = slope * a < 1e-12 * (1.0 + std::abs(f0));
                bool armijo = fn >= f0 + 1e-4 * a * slope || (tiny && fn >= f0 - 1e-13 * (1.0 + std::abs(f0)));
                bool monotone = Vn >= V - 1e-13 * (1.0 + std::abs(V));
                if (armijo && monotone) {
                    x = xn;
                    st = sn;
                    V = Vn;
                    return true;
                }
            }
            return false;
        };
        bool moved = false;
        if (auto d = direction(mu)) moved = try_step(*d, mu);
        if (!moved && mu > 0.0) {
            method = "newton-unbarriered";
            if (auto d = direction(0.0)) moved = try_step(*d, 0.0);
        }
        if (!moved) {
            method = "projected-gradient";
            Vec d = Z_ * (Z_.transpose() * g);
            moved = try_step(d, 0.0);
        }
        Json tr;
        tr["iter"] = iter;
        tr["volume"] = V;
        tr["grad_norm"] = gn;
        tr["length_residual"] = lr;
        tr["mu"] = mu;
        tr["method"] = method;
        sol.trace.push_back(tr);
        if (!moved) {
            ++iter;
            return finish("LineSearchFailure", false);
        }
        mu = mu > 1e-12 ? mu * 0.01 : 0.0;
    }
    return finish("MaxIterations", false);
}

inline Json solution_report(const Solution& s) {
    Json j;
    j["status"] = s.status;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["volume"] = s.volume;
    j["projected_gradient_norm"] = s.grad_norm;
    j["edge_length_residual"] = s.length_residual;
    j["trace"] = s.trace;
    j["boundary"] = s.boundary;
    return j;
}

}  // namespace hyperpat
