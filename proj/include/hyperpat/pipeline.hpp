// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/demos.hpp"
#include "hyperpat/io.hpp"
#include "hyperpat/reconstruct.hpp"
#include "hyperpat/solver.hpp"

#include <optional>
#include <string>

namespace hyperpat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRejected = 2;
inline constexpr int kExitSolverFailure = 3;

inline Json error_to_json(const Error& e) {
    return {{"error", e.kind()}, {"message", e.what()}, {"witness", e.witness()}};
}

inline Problem demo_problem(const Demo& d) {
    Problem p;
    p.complex = d.complex;
    p.angles.geometry = d.geometry;
    p.angles.theta = d.theta;
    p.angles.kappa = d.kappa;
    return p;
}

// The closed problem obtained by doubling a framed one.
inline Problem doubled_problem(const Problem& p) {
    if (!p.framed()) throw Error("NoBoundary", "only problems on surfaces with boundary can be doubled");
    ExtendedComplex x = extended_graph(p.complex);
    DoubledComplex d = double_complex(x);
    ConditionInstance in = double_instance(x, d, problem_instance(p));
    Problem out;
    out.complex = d.complex;
    out.angles.geometry = p.angles.geometry;
    out.angles.theta = in.theta;
    out.angles.kappa = in.kappa;
    if (p.angles.has_ideal_faces) {
        out.angles.has_ideal_faces = true;
        out.angles.ideal_faces = in.forced_ideal;
    }
    return out;
}

struct PipelineOptions {
    SolverOptions solver;
    CheckOptions check;
    VerifyTolerances verify;
    int fan_rotation = 0;
    bool random_start = false;
};

struct PipelineResult {
    int exit_code = kExitOk;
    Verdict verdict;
    ConditionInstance solved;  // the closed instance handed to the solver
    std::optional<TetComplex> tets;
    std::optional<Solution> solution;
    std::optional<Pattern> pattern;
    Json verify = Json::object();
    Json framed = Json();
    Json document = Json::object();
};

inline Json tets_to_json(const TetComplex& tc, const Solution& s) {
    Json out = Json::array();
    for (std::size_t t = 0; t < s.tets.size(); ++t) {
        Json j = tet_to_json(s.tets[t].tet);
        j["index"] = t;
        j["pyramid"] = tc.tets[t].pyramid;
        j["faces"] = tc.tets[t].face;
        j["angles"] = s.angles[t];
        j["lengths"] = s.tets[t].lengths;
        j["volume"] = s.tets[t].volume;
        out.push_back(j);
    }
    return out;
}

// validate, build, initial point, maximize, develop, verify; framed problems
// go through the doubled surface and are restricted back afterwards.
inline PipelineResult run_solve(const Problem& problem, const PipelineOptions& opt = {}) {
    PipelineResult r;
    Json& doc = r.document;
    ConditionInstance framed_in;
    std::optional<ExtendedComplex> x;
    std::optional<DoubledComplex> d;
    if (problem.framed()) {
        framed_in = problem_instance(problem);
        Verdict fv = check_conditions(framed_in, opt.check);
        doc["framed_verdict"] = verdict_to_json(fv);
        x = extended_graph(problem.complex);
        d = double_complex(*x);
        r.solved = double_instance(*x, *d, framed_in);
    } else {
        r.solved = problem_instance(problem);
    }
    r.verdict = check_conditions(r.solved, opt.check);
    doc["verdict"] = verdict_to_json(r.verdict);
    doc["geometry"] = geometry_name(r.solved.geometry);
    if (!r.verdict.accepted) {
        r.exit_code = kExitRejected;
        return r;
    }
    try {
        r.tets = build_tet_complex(r.solved.complex, r.verdict.ideal_faces, r.solved.geometry, opt.fan_rotation);
        Solver solver(*r.tets, target_edge_sums(*r.tets, r.solved, r.verdict), opt.solver);
        Solver::Vec x0 = opt.random_start ? solver.random_point(opt.solver.seed) : solver.initial_point();
        r.solution = solver.maximize(x0);
        doc["solver"] = solution_report(*r.solution);
        doc["solver"]["seed"] = opt.solver.seed;
        doc["solver"]["random_start"] = opt.random_start;
        doc["solver"]["fan_rotation"] = opt.fan_rotation;
        doc["angles"] = r.solution->angles;
        doc["edge_class_lengths"] = r.solution->class_length;
        if (!r.solution->converged) {
            r.exit_code = kExitSolverFailure;
            doc["error"] = {{"error", r.solution->status},
                            {"message", "solver stopped before convergence"},
                            {"witness", {{"projected_gradient_norm", r.solution->grad_norm},
                                         {"edge_length_residual", r.solution->length_residual},
                                         {"boundary", r.solution->boundary}}}};
            return r;
        }
        r.pattern = develop(r.solved.complex, *r.tets, *r.solution);
        r.verify = verify_pattern(*r.pattern, r.solved, opt.verify);
        Json pj = pattern_to_json(*r.pattern);
        for (auto it = pj.begin(); it != pj.end(); ++it) doc[it.key()] = it.value();
        doc["residuals"] = r.verify;
        bool ok = r.verify.at("ok").get<bool>();
        if (problem.framed()) {
            r.framed = restrict_symmetric(*r.pattern, *x, *d, framed_in);
            doc["framed"] = r.framed;
            ok = ok && r.framed.at("framed_angle_max_error").get<double>() < opt.verify.theta;
        }
        doc["ok"] = ok;
        r.exit_code = ok ? kExitOk : kExitSolverFailure;
    } catch (const Error& e) {
        doc["error"] = error_to_json(e);
        r.exit_code = kExitSolverFailure;
    }
    return r;
}

}  // namespace hyperpat
