// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace hyperpat;
using namespace hyperpat::testing;

namespace {

ConditionInstance torus_instance(Angle th) {
    CellComplex c = torus_grid(2, 2);
    return closed_instance(c, Geometry::euclidean, std::vector<Angle>(8, th), std::vector<Angle>(4, pi_times(0)));
}

CellComplex annulus() {
    return complex_from_faces(6,
                              {{{0, 100}, {1, 11}, {4, 101}, {3, 10}},
                               {{1, 102}, {2, 12}, {5, 103}, {4, 11}},
                               {{2, 104}, {0, 10}, {3, 105}, {5, 12}}},
                              SurfaceDeclaration{0, 2});
}

// Sphere made of two hexagons glued along their boundary.
CellComplex hexagon_pillow() {
    return complex_from_faces(6, {{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}},
                                  {{0, 5}, {5, 4}, {4, 3}, {3, 2}, {2, 1}, {1, 0}}});
}

Angle twelfths(int k) { return pi_times(k, 12); }

void expect_same_verdict(const Verdict& a, const Verdict& b, const std::string& what) {
    EXPECT_EQ(a.accepted, b.accepted) << what;
    EXPECT_EQ(a.reason, b.reason) << what;
    EXPECT_EQ(a.ideal_faces, b.ideal_faces) << what;
}

// Random euclidean angle data on a closed complex, in multiples of pi/12.
ConditionInstance random_closed(const CellComplex& c, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> th(3, 11);
    std::vector<Angle> theta;
    for (int e = 0; e < c.num_edges(); ++e) theta.push_back(twelfths(th(rng)));
    std::vector<int> k(c.num_faces(), 0);
    int total = 24 * c.euler_characteristic();
    std::uniform_int_distribution<int> pick(0, c.num_faces() - 1);
    for (int i = 0; i < total; ++i) {
        int f = pick(rng);
        while (k[f] >= 23) f = pick(rng);
        ++k[f];
    }
    std::vector<Angle> kappa;
    for (int x : k) kappa.push_back(twelfths(x));
    return closed_instance(c, Geometry::euclidean, theta, kappa);
}

}  // namespace

TEST(Validator, TorusTable) {
    Verdict a = check_conditions(torus_instance(pi_times(1, 2)));
    EXPECT_TRUE(a.accepted);
    EXPECT_EQ(a.ideal_faces, (std::vector<int>{0, 1, 2, 3}));

    Verdict b = check_conditions(torus_instance(pi_times(2, 3)));
    EXPECT_TRUE(b.accepted);
    EXPECT_TRUE(b.ideal_faces.empty());

    Verdict r = check_conditions(torus_instance(pi_times(1, 4)));
    EXPECT_FALSE(r.accepted);
    EXPECT_EQ(r.reason, "DomainViolation");
    EXPECT_EQ(r.witness["faces"].size(), 1u);
    EXPECT_TRUE(r.witness["inner_edges"].empty());
    EXPECT_TRUE(r.witness["partial_faces"].empty());
    EXPECT_LT(r.witness["lhs"].get<double>(), r.witness["rhs"].get<double>());
}

TEST(Validator, AcceptsEveryDemo) {
    for (const auto& name : demo_names()) {
        Verdict v = check_conditions(demo_instance(make_demo(name)));
        EXPECT_TRUE(v.accepted) << name << ": " << v.reason;
        EXPECT_GT(v.domains_checked, 0u) << name;
    }
    Verdict k4 = check_conditions(demo_instance(make_demo("k4-sphere-euclidean")));
    EXPECT_TRUE(k4.ideal_faces.empty());
}

TEST(Validator, InexactAnglesUseTolerance) {
    Verdict v = check_conditions(torus_instance(Angle::radians(kPi / 2)));
    EXPECT_TRUE(v.accepted);
    EXPECT_EQ(v.ideal_faces.size(), 4u);
}

TEST(Validator, GaussBonnetMismatch) {
    ConditionInstance in = torus_instance(pi_times(1, 2));
    in.kappa[1] = pi_times(1, 2);
    Verdict v = check_conditions(in);
    EXPECT_EQ(v.reason, "GaussBonnetMismatch");
    EXPECT_EQ(v.witness["relation"], "==");

    ConditionInstance h = demo_instance(make_demo("genus2-hyperbolic"));
    for (auto& k : h.kappa) k = pi_times(0);
    h.complex = torus_grid(2, 2);
    h.theta.assign(8, pi_times(2, 3));
    h.kappa.assign(4, pi_times(0));
    h.kappa_face.assign(4, true);
    Verdict hv = check_conditions(h);
    EXPECT_EQ(hv.reason, "GaussBonnetMismatch");
    EXPECT_EQ(hv.witness["relation"], ">");
}

TEST(Validator, ThetaOutOfRange) {
    for (Angle bad : {pi_times(1), pi_times(0), pi_times(5, 4)}) {
        ConditionInstance in = torus_instance(pi_times(1, 2));
        in.theta[2] = bad;
        Verdict v = check_conditions(in);
        EXPECT_EQ(v.reason, "ThetaOutOfRange");
        EXPECT_EQ(v.witness["edge"], 2);
    }
}

TEST(Validator, FramedSpokesMustBeBelowRightAngle) {
    ConditionInstance in = demo_instance(make_demo("square-disk-framed"));
    in.theta[in.spoke_edges[1]] = pi_times(1, 2);
    Verdict v = check_conditions(in);
    EXPECT_EQ(v.reason, "ThetaOutOfRange");
    EXPECT_EQ(v.witness["edge"], in.spoke_edges[1]);
}

TEST(Validator, KappaOutOfRange) {
    ConditionInstance in = demo_instance(make_demo("k4-sphere-euclidean"));
    in.kappa[0] = pi_times(2);
    in.kappa[1] = pi_times(0);
    Verdict v = check_conditions(in);
    EXPECT_EQ(v.reason, "KappaOutOfRange");
    EXPECT_EQ(v.witness["face"], 0);
}

TEST(Validator, DegenerateFace) {
    CellComplex c = complex_from_faces(2, {{{0, 1}, {1, 2}}, {{0, 2}, {1, 1}}});
    ASSERT_EQ(c.euler_characteristic(), 2);
    Verdict v = check_conditions(closed_instance(c, Geometry::euclidean, {pi_times(1, 2), pi_times(1, 2)},
                                                 {pi_times(1), pi_times(1)}));
    EXPECT_EQ(v.reason, "DegenerateFace");
}

TEST(Validator, ForcedIdealMustAchieveEquality) {
    ConditionInstance in = torus_instance(pi_times(2, 3));
    in.forced_ideal = {0};
    EXPECT_EQ(check_conditions(in).reason, "ForcedIdealMismatch");
    ConditionInstance ok = torus_instance(pi_times(1, 2));
    ok.forced_ideal = {0, 3};
    EXPECT_TRUE(check_conditions(ok).accepted);
}

TEST(Validator, MalformedAngleCounts) {
    ConditionInstance in = torus_instance(pi_times(1, 2));
    in.theta.pop_back();
    try {
        check_conditions(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "MalformedAngles");
    }
}

TEST(Validator, PruningDoesNotChangeVerdicts) {
    std::mt19937_64 rng(101);
    CheckOptions brute;
    brute.domains.prune = false;
    brute.domains.chord_budget = 4;
    for (const CellComplex& c : {torus_grid(2, 2), tetrahedron_graph(), torus_grid(3, 1)}) {
        for (int i = 0; i < 15; ++i) {
            ConditionInstance in = random_closed(c, rng);
            Verdict p = check_conditions(in);
            Verdict b = check_conditions(in, brute);
            expect_same_verdict(p, b, "sample " + std::to_string(i));
            EXPECT_GE(b.domains_checked, p.domains_checked);
        }
    }
}

TEST(Validator, DisksSufficeForNonNegativeCurvature) {
    std::mt19937_64 rng(202);
    CheckOptions disks;
    disks.domains.disks_only = true;
    int rejected = 0;
    for (const CellComplex& c : {torus_grid(2, 2), tetrahedron_graph()}) {
        for (int i = 0; i < 20; ++i) {
            ConditionInstance in = random_closed(c, rng);
            Verdict full = check_conditions(in);
            rejected += !full.accepted;
            expect_same_verdict(full, check_conditions(in, disks), "sample " + std::to_string(i));
        }
    }
    EXPECT_GT(rejected, 0);
}

TEST(Validator, InvariantUnderHalfEdgeRelabeling) {
    std::mt19937_64 rng(303);
    CellComplex c = genus_two_quads();
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
    std::uniform_int_distribution<int> th(5, 10);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Angle> ta;
        for (int e = 0; e < c.num_edges(); ++e) ta.push_back(twelfths(th(rng)));
        std::vector<Angle> tb(ta.size());
        for (int e = 0; e < c.num_edges(); ++e) tb[d.edge_of[sigma[c.edge_half_edge[e]]]] = ta[e];
        std::vector<Angle> ka(c.num_faces(), pi_times(0)), kb(c.num_faces(), pi_times(0));
        Verdict a = check_conditions(closed_instance(c, Geometry::hyperbolic, ta, ka));
        Verdict b = check_conditions(closed_instance(d, Geometry::hyperbolic, tb, kb));
        EXPECT_EQ(a.accepted, b.accepted);
        EXPECT_EQ(a.reason, b.reason);
        std::vector<int> mapped;
        for (int f : a.ideal_faces) mapped.push_back(d.face_of[sigma[c.face_half_edges[f][0]]]);
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, b.ideal_faces);
    }
}

TEST(Validator, FramedAndDoubledVerdictsAgree) {
    std::mt19937_64 rng(404);
    ExtendedComplex x = extended_graph(square_disk());
    DoubledComplex d = double_complex(x);
    std::uniform_int_distribution<int> inner(2, 11), spoke(1, 5), bnd(1, 5);
    int accepted = 0, rejected = 0;
    for (int i = 0; i < 40; ++i) {
        std::vector<Angle> theta(x.ext.num_edges());
        for (int e = 0; e < x.ext.num_edges(); ++e) theta[e] = twelfths(inner(rng));
        for (int e : x.spoke_edges) theta[e] = twelfths(spoke(rng));
        int sum = 0;
        for (int e : x.boundary_edges) {
            int k = bnd(rng);
            sum += k;
            theta[e] = twelfths(k);
        }
        ConditionInstance framed = framed_instance(x, Geometry::euclidean, theta, {twelfths(24 - sum)});
        ConditionInstance doubled = double_instance(x, d, framed);
        Verdict vf = check_conditions(framed), vd = check_conditions(doubled);
        EXPECT_EQ(vf.accepted, vd.accepted) << "sample " << i << ": " << vf.reason << " / " << vd.reason;
        (vf.accepted ? accepted : rejected) += 1;
    }
    EXPECT_GT(accepted, 0);
    EXPECT_GT(rejected, 0);
}

TEST(Validator, FramedReadingFlag) {
    ExtendedComplex x = extended_graph(annulus());
    std::vector<Angle> theta(x.ext.num_edges(), pi_times(2, 3));
    for (int e : x.spoke_edges) theta[e] = pi_times(1, 4);
    for (int e : x.boundary_edges) theta[e] = pi_times(1, 3);
    ConditionInstance in = framed_instance(x, Geometry::hyperbolic, theta, std::vector<Angle>(3, pi_times(0)));
    CheckOptions two_pi;
    two_pi.framed_reading = FramedReading::two_pi;
    Verdict a = check_conditions(in);
    Verdict b = check_conditions(in, two_pi);
    EXPECT_NE(a.reason, "GaussBonnetMismatch");
    EXPECT_EQ(b.reason, "GaussBonnetMismatch");
    EXPECT_EQ(a.flags["framed_reading"], "euler_characteristic");
    EXPECT_EQ(b.flags["framed_reading"], "two_pi");
}

TEST(DomainEnumeration, SharedEndpointChordsAreFlagged) {
    CellComplex c = hexagon_pillow();
    ASSERT_EQ(c.face_half_edges[0].size(), 6u);
    auto count = [&](int budget) {
        DomainOptions opt;
        opt.chord_budget = budget;
        DomainEnumerator en(c, opt);
        std::size_t shared = 0, total = 0;
        en.run([&](const Domain& d) {
            ++total;
            shared += d.shares_endpoint;
            return true;
        });
        return std::make_pair(shared, total);
    };
    auto one = count(1);
    auto two = count(2);
    EXPECT_EQ(one.first, 0u);
    EXPECT_GT(two.first, 0u);
    EXPECT_GT(two.second, one.second);
}

TEST(DomainEnumeration, PartialOptionsOfAQuad) {
    CellComplex c = torus_grid(2, 2);
    auto opts = detail::partial_options(c, 0, 2);
    for (const auto& o : opts) {
        ASSERT_LE(o.chords.size(), 1u);
        for (auto [a, b] : o.chords) EXPECT_EQ((b - a + 4) % 4, 2);
    }
    EXPECT_FALSE(opts.empty());
}

TEST(DomainEnumeration, DeterministicOrder) {
    auto run = [] {
        std::vector<std::string> out;
        CellComplex c = tetrahedron_graph();
        DomainEnumerator en(c, DomainOptions{});
        en.run([&](const Domain& d) {
            out.push_back(Json(d.faces).dump() + Json(d.inner_edges).dump());
            return true;
        });
        return out;
    };
    auto a = run();
    EXPECT_EQ(a, run());
    EXPECT_FALSE(a.empty());
}

TEST(Bouquet, SumsToConeAngle) {
    EXPECT_TRUE(bouquet_check({kPi / 2, kPi / 2, kPi / 2, kPi / 2}, 0.0));
    EXPECT_FALSE(bouquet_check({kPi / 2, kPi / 2, kPi / 2, kPi / 2}, kPi / 2));
    EXPECT_TRUE(bouquet_check({kPi / 2, kPi / 2, kPi / 2}, kPi / 2));
}

TEST(VerdictJson, CarriesReasonAndWitness) {
    Json j = verdict_to_json(check_conditions(torus_instance(pi_times(1, 4))));
    EXPECT_EQ(j["verdict"], "rejected");
    EXPECT_EQ(j["reason"], "DomainViolation");
    EXPECT_TRUE(j["witness"].contains("faces"));
    Json k = verdict_to_json(check_conditions(torus_instance(pi_times(1, 2))));
    EXPECT_EQ(k["ideal_faces"].size(), 4u);
}
