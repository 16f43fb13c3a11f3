// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/hyperpat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <random>
#include <vector>

namespace hyperpat::testing {

// Regular ideal tetrahedron volume, 3 * Lambda(pi / 3), to 20 digits.
inline constexpr double kRegularIdealVolume = 1.01494160640965362502;

inline std::array<VertexType, 4> random_types(std::mt19937_64& rng, double ideal_probability = 0.35) {
    std::bernoulli_distribution coin(ideal_probability);
    std::array<VertexType, 4> t{};
    for (auto& v : t) v = coin(rng) ? VertexType::ideal : VertexType::hyperideal;
    return t;
}

// Rejection sampler for a feasible tetrahedron with the given vertex types.
inline Tet random_tet(std::mt19937_64& rng, const std::array<VertexType, 4>& types) {
    std::uniform_real_distribution<double> u(0.05, 2.0);
    std::vector<int> ideal;
    for (int v = 0; v < 4; ++v)
        if (types[v] == VertexType::ideal) ideal.push_back(v);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<int>(ideal.size()), 6);
    for (std::size_t r = 0; r < ideal.size(); ++r)
        for (int e = 0; e < 6; ++e)
            if (kEdgeVertices[e][0] == ideal[r] || kEdgeVertices[e][1] == ideal[r]) A(static_cast<int>(r), e) = 1.0;
    for (int tries = 0; tries < 100000; ++tries) {
        Eigen::Matrix<double, 6, 1> x;
        for (int e = 0; e < 6; ++e) x[e] = u(rng);
        if (!ideal.empty()) {
            Eigen::VectorXd r = A * x - Eigen::VectorXd::Constant(A.rows(), kPi);
            x -= A.transpose() * (A * A.transpose()).ldlt().solve(r);
        }
        std::array<double, 6> a{};
        bool ok = true;
        for (int e = 0; e < 6; ++e) {
            a[e] = x[e];
            ok = ok && a[e] > 0.05 && a[e] < kPi - 0.05;
        }
        if (!ok) continue;
        for (int v = 0; v < 4; ++v)
            if (types[v] == VertexType::hyperideal && link_sum(a, v) > kPi - 0.05) ok = false;
        if (!ok) continue;
        try {
            return tet_from_angles(a, types);
        } catch (const Error&) {
        }
    }
    throw Error("SamplerExhausted", "no feasible tetrahedron found");
}

// Unit direction in angle space keeping every ideal link sum fixed.
inline Eigen::Matrix<double, 6, 1> random_link_direction(std::mt19937_64& rng, const std::array<VertexType, 4>& types) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix<double, 6, 1> d;
    for (int e = 0; e < 6; ++e) d[e] = n(rng);
    for (int pass = 0; pass < 50; ++pass)
        for (int v = 0; v < 4; ++v) {
            if (types[v] != VertexType::ideal) continue;
            double s = 0.0;
            for (int e = 0; e < 6; ++e)
                if (kEdgeVertices[e][0] == v || kEdgeVertices[e][1] == v) s += d[e];
            for (int e = 0; e < 6; ++e)
                if (kEdgeVertices[e][0] == v || kEdgeVertices[e][1] == v) d[e] -= s / 3.0;
        }
    return d.normalized();
}

inline double volume_at(const std::array<double, 6>& a, const Eigen::Matrix<double, 6, 1>& d, double h,
                        const std::array<VertexType, 4>& types) {
    std::array<double, 6> b{};
    for (int e = 0; e < 6; ++e) b[e] = a[e] + h * d[e];
    return truncated_volume(tet_from_angles(b, types));
}

struct Solved {
    ConditionInstance instance;
    Verdict verdict;
    TetComplex tc;
    std::vector<double> targets;
    Solution solution;
};

inline ConditionInstance closed_demo_instance(const std::string& name) {
    Demo d = make_demo(name);
    ConditionInstance in = demo_instance(d);
    if (!d.framed) return in;
    ExtendedComplex x = extended_graph(d.complex);
    DoubledComplex dc = double_complex(x);
    return double_instance(x, dc, in);
}

inline Solved solve_instance(const ConditionInstance& in, int fan_rotation = 0, SolverOptions opt = {}) {
    Solved s;
    s.instance = in;
    s.verdict = check_conditions(in);
    if (!s.verdict.accepted) throw Error("Rejected", s.verdict.message);
    s.tc = build_tet_complex(in.complex, s.verdict.ideal_faces, in.geometry, fan_rotation);
    s.targets = target_edge_sums(s.tc, in, s.verdict);
    Solver solver(s.tc, s.targets, opt);
    s.solution = solver.maximize(solver.initial_point());
    return s;
}

inline double max_abs_diff(const std::vector<std::array<double, 6>>& a, const std::vector<std::array<double, 6>>& b) {
    double m = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t)
        for (int e = 0; e < 6; ++e) m = std::max(m, std::abs(a[t][e] - b[t][e]));
    return m;
}

inline std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace hyperpat::testing
