// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace hyperpat;
using namespace hyperpat::testing;

namespace {

struct Prepared {
    ConditionInstance in;
    Verdict verdict;
    TetComplex tc;
    std::vector<double> targets;
};

Prepared setup(const ConditionInstance& in, int fan_rotation = 0) {
    Prepared s;
    s.in = in;
    s.verdict = check_conditions(in);
    EXPECT_TRUE(s.verdict.accepted) << s.verdict.reason;
    s.tc = build_tet_complex(in.complex, s.verdict.ideal_faces, in.geometry, fan_rotation);
    s.targets = target_edge_sums(s.tc, in, s.verdict);
    return s;
}

double edge_sum_residual(const TetComplex& tc, const std::vector<double>& targets, const Solution& sol) {
    double worst = 0.0;
    for (std::size_t k = 0; k < tc.edges.size(); ++k) {
        double s = 0.0;
        for (auto [t, slot] : tc.edges[k].incidence) s += sol.angles[t][slot];
        worst = std::max(worst, std::abs(s - targets[k]));
    }
    return worst;
}

std::vector<double> sorted_angles(const std::array<double, 6>& a) { return sorted({a.begin(), a.end()}); }

}  // namespace

TEST(TetComplex, Counts) {
    auto count = [](const std::string& name) {
        Prepared s = setup(closed_demo_instance(name));
        EXPECT_EQ(static_cast<int>(s.tc.vertical_class.size()), s.in.complex.num_faces());
        EXPECT_EQ(static_cast<int>(s.tc.horizontal_class.size()), s.in.complex.num_edges());
        EXPECT_EQ(static_cast<int>(s.tc.pyramids.size()), s.in.complex.num_vertices);
        return s.tc.tets.size();
    };
    EXPECT_EQ(count("torus-ideal-right-angles"), 8u);
    EXPECT_EQ(count("k4-sphere-euclidean"), 4u);
    EXPECT_EQ(count("genus2-hyperbolic"), 16u);
}

TEST(TetComplex, IdealFacesGiveIdealVertices) {
    Prepared s = setup(closed_demo_instance("torus-ideal-right-angles"));
    for (const auto& t : s.tc.tets)
        for (int i = 0; i < 4; ++i)
            if (t.face[i] >= 0) {
                EXPECT_EQ(t.types[i], VertexType::ideal);
            }
    Prepared h = setup(closed_demo_instance("torus-hyperideal-2pi3"));
    for (const auto& t : h.tc.tets)
        for (int i = 0; i < 4; ++i)
            if (t.face[i] >= 0) {
                EXPECT_EQ(t.types[i], VertexType::hyperideal);
            }
}

TEST(Solver, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (const char* name : {"torus-hyperideal-2pi3", "genus2-hyperbolic", "torus-ideal-right-angles"}) {
        Prepared s = setup(closed_demo_instance(name));
        Solver solver(s.tc, s.targets);
        Solver::Vec x = solver.random_point(3);
        Solver::Vec g = solver.volume_gradient(x);
        for (int k = 0; k < 3; ++k) {
            Solver::Vec y(solver.reduced_dim());
            for (int i = 0; i < y.size(); ++i) y[i] = n(rng);
            Solver::Vec d = solver.null_space() * y.normalized();
            double h = 1e-5;
            double fd = (solver.total_volume(x + h * d) - solver.total_volume(x - h * d)) / (2 * h);
            EXPECT_NEAR(fd, g.dot(d), 1e-5 * std::max(1.0, std::abs(fd))) << name;
        }
    }
}

TEST(Solver, HessianIsNegativeDefiniteOnTheAffineSpace) {
    for (const char* name : {"torus-hyperideal-2pi3", "genus2-hyperbolic", "k4-sphere-euclidean"}) {
        Prepared s = setup(closed_demo_instance(name));
        Solver solver(s.tc, s.targets);
        Solver::Vec x = solver.initial_point();
        Solver::Mat H = solver.null_space().transpose() * solver.volume_hessian(x) * solver.null_space();
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Solver::Mat> es(H);
        EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0) << name;
    }
}

TEST(Solver, RightAngledTorusIsSolvedToRoundoff) {
    Prepared s = setup(closed_demo_instance("torus-ideal-right-angles"));
    Solver solver(s.tc, s.targets);
    Solution sol = solver.maximize(solver.initial_point());
    EXPECT_TRUE(sol.converged) << sol.status;
    EXPECT_LT(sol.length_residual, 1e-9);
    EXPECT_LT(edge_sum_residual(s.tc, s.targets, sol), 1e-10);
    auto ref = sorted_angles(sol.angles[0]);
    for (const auto& a : sol.angles) {
        auto b = sorted_angles(a);
        for (int e = 0; e < 6; ++e) EXPECT_NEAR(b[e], ref[e], 1e-8);
    }
}

TEST(Solver, SymmetricStartOnTheTetrahedronGraph) {
    Prepared s = setup(closed_demo_instance("k4-sphere-euclidean"));
    Solver solver(s.tc, s.targets);
    Solver::Vec x = solver.initial_point();
    auto ref = sorted_angles(solver.tet_angles(x, 0));
    for (int t = 1; t < static_cast<int>(s.tc.tets.size()); ++t) {
        auto b = sorted_angles(solver.tet_angles(x, t));
        for (int e = 0; e < 6; ++e) EXPECT_NEAR(b[e], ref[e], 1e-8);
    }
    Solution sol = solver.maximize(x);
    EXPECT_TRUE(sol.converged) << sol.status;
    EXPECT_LT(sol.length_residual, 1e-7);
}

TEST(Solver, InconsistentTargetsHaveNoInteriorPoint) {
    Prepared s = setup(closed_demo_instance("torus-hyperideal-2pi3"));
    std::vector<double> bad = s.targets;
    bad[s.tc.horizontal_class[0]] = 10.0 * kPi;
    try {
        Solver solver(s.tc, bad);
        solver.initial_point();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NoInteriorPoint");
    }
    std::vector<double> tiny = s.targets;
    for (int k : s.tc.vertical_class) tiny[k] = 1e-3;
    try {
        Solver solver(s.tc, tiny);
        solver.initial_point();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NoInteriorPoint");
    }
}

TEST(Solver, VolumeInvariantUnderRelabeling) {
    std::mt19937_64 rng(41);
    Demo demo = make_demo("genus2-hyperbolic");
    const CellComplex& c = demo.complex;
    std::vector<int> sigma(c.num_half_edges());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<int> origin(sigma.size()), next(sigma.size()), twin(sigma.size());
    for (int h = 0; h < c.num_half_edges(); ++h) {
        origin[sigma[h]] = c.origin[h];
        next[sigma[h]] = sigma[c.next[h]];
        twin[sigma[h]] = sigma[c.twin[h]];
    }
    CellComplex d = build_complex(c.num_vertices, origin, next, twin);
    std::vector<Angle> theta(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e) theta[d.edge_of[sigma[c.edge_half_edge[e]]]] = demo.theta[e];
    Solved a = solve_instance(demo_instance(demo));
    Solved b = solve_instance(closed_instance(d, Geometry::hyperbolic, theta, demo.kappa));
    ASSERT_TRUE(a.solution.converged && b.solution.converged);
    EXPECT_NEAR(a.solution.volume, b.solution.volume, 1e-9);
}

TEST(Solver, RandomStartsReachTheSameMaximum) {
    Prepared s = setup(closed_demo_instance("genus2-hyperbolic"));
    Solver solver(s.tc, s.targets);
    Solution a = solver.maximize(solver.random_point(11));
    Solution b = solver.maximize(solver.random_point(12));
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LT(max_abs_diff(a.angles, b.angles), 1e-6);
    EXPECT_NEAR(a.volume, b.volume, 1e-10);
}

TEST(Solver, SolutionDependsContinuouslyOnAngles) {
    Demo demo = make_demo("genus2-hyperbolic");
    Solved base = solve_instance(demo_instance(demo));
    std::vector<double> ratio;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        Demo p = demo;
        p.theta[0] = Angle::radians(p.theta[0].value + delta);
        p.theta[5] = Angle::radians(p.theta[5].value - delta);
        Solved s = solve_instance(demo_instance(p));
        ASSERT_TRUE(s.solution.converged);
        double diff = 0.0;
        for (std::size_t k = 0; k < s.solution.class_length.size(); ++k)
            diff = std::max(diff, std::abs(s.solution.class_length[k] - base.solution.class_length[k]));
        ratio.push_back(diff / delta);
    }
    for (double r : ratio) EXPECT_LT(r, 100.0);
    EXPECT_NEAR(ratio[1], ratio[2], 0.1 * ratio[2]);
}

TEST(Solver, TraceVolumeIsMonotone) {
    for (const char* name : {"genus2-hyperbolic", "k4-sphere-euclidean"}) {
        Prepared s = setup(closed_demo_instance(name));
        Solver solver(s.tc, s.targets);
        Solution sol = solver.maximize(solver.random_point(5));
        ASSERT_TRUE(sol.converged);
        ASSERT_FALSE(sol.trace.empty());
        double prev = -1e300;
        for (const auto& tr : sol.trace) {
            double v = tr["volume"];
            EXPECT_GE(v, prev - 1e-12 * std::abs(v));
            prev = v;
        }
    }
}

TEST(Solver, WorkerCountDoesNotChangeResults) {
    Prepared s = setup(closed_demo_instance("genus2-hyperbolic"));
    SolverOptions one, three;
    one.workers = 1;
    three.workers = 3;
    Solver a(s.tc, s.targets, one), b(s.tc, s.targets, three);
    Solution sa = a.maximize(a.initial_point()), sb = b.maximize(b.initial_point());
    EXPECT_EQ(sa.angles, sb.angles);
    EXPECT_EQ(sa.volume, sb.volume);
    EXPECT_EQ(sa.iterations, sb.iterations);
}

TEST(Solver, ConvergedSolutionsSatisfyEdgeSums) {
    for (const auto& name : demo_names()) {
        Solved s = solve_instance(closed_demo_instance(name));
        EXPECT_TRUE(s.solution.converged) << name;
        EXPECT_LT(edge_sum_residual(s.tc, s.targets, s.solution), 1e-9) << name;
        EXPECT_LT(s.solution.length_residual, 1e-7) << name;
        Json r = solution_report(s.solution);
        EXPECT_EQ(r["status"], "converged");
    }
}

TEST(Solver, EarlyStopReportsBoundaryProximity) {
    Prepared s = setup(closed_demo_instance("genus2-hyperbolic"));
    SolverOptions opt;
    opt.max_iter = 1;
    Solver solver(s.tc, s.targets, opt);
    Solution sol = solver.maximize(solver.initial_point());
    EXPECT_FALSE(sol.converged);
    EXPECT_EQ(sol.status, "MaxIterations");
    EXPECT_GT(sol.boundary["margin"].get<double>(), 0.0);
    ASSERT_EQ(sol.boundary["tightest"].size(), 5u);
    EXPECT_LE(sol.boundary["tightest"][0]["slack"].get<double>(), sol.boundary["tightest"][4]["slack"].get<double>());
    EXPECT_TRUE(sol.boundary.contains("shortest_edge_class"));
}
