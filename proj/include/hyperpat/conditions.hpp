// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/surface_complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace hyperpat {

enum class Geometry : std::uint8_t { euclidean, hyperbolic };

inline std::string geometry_name(Geometry g) { return g == Geometry::euclidean ? "euclidean" : "hyperbolic"; }

inline Geometry parse_geometry(const std::string& s) {
    if (s == "euclidean") return Geometry::euclidean;
    if (s == "hyperbolic") return Geometry::hyperbolic;
    throw Error("ParseError", "geometry must be 'euclidean' or 'hyperbolic'", {{"value", s}});
}

// Which right-hand side the framed hyperbolic condition (1) uses.
enum class FramedReading : std::uint8_t { euler_characteristic, two_pi };

// Angle data on the complex carrying theta: the closed complex itself, or the
// extended graph for framed problems. Kappa is indexed by faces of that
// complex; collar faces of an extended graph carry no curvature.
struct ConditionInstance {
    CellComplex complex;
    Geometry geometry = Geometry::euclidean;
    bool framed = false;
    std::vector<Angle> theta;
    std::vector<Angle> kappa;
    std::vector<bool> kappa_face;
    std::vector<int> spoke_edges;
    std::vector<int> boundary_edges;
    std::vector<int> forced_ideal;
};

inline ConditionInstance closed_instance(const CellComplex& c, Geometry g, std::vector<Angle> theta,
                                         std::vector<Angle> kappa) {
    ConditionInstance in;
    in.complex = c;
    in.geometry = g;
    in.theta = std::move(theta);
    in.kappa = std::move(kappa);
    in.kappa_face.assign(c.num_faces(), true);
    return in;
}

// Framed instance on the extended graph; kappa is given on the base faces.
inline ConditionInstance framed_instance(const ExtendedComplex& x, Geometry g, std::vector<Angle> theta,
                                         const std::vector<Angle>& base_kappa) {
    ConditionInstance in;
    in.complex = x.ext;
    in.geometry = g;
    in.framed = true;
    in.theta = std::move(theta);
    in.kappa.assign(x.ext.num_faces(), pi_times(0));
    in.kappa_face.assign(x.ext.num_faces(), false);
    for (int f = 0; f < x.base.num_faces(); ++f) {
        in.kappa[f] = base_kappa.at(f);
        in.kappa_face[f] = true;
    }
    in.spoke_edges = x.spoke_edges;
    in.boundary_edges = x.boundary_edges;
    return in;
}

// Angle data on the doubled complex: base edges and faces are copied, spokes
// carry twice the boundary angle and each collar face gets a cone angle
// deficit of twice the polygonal angle of its boundary edge.
inline ConditionInstance double_instance(const ExtendedComplex& x, const DoubledComplex& d,
                                         const ConditionInstance& framed) {
    const CellComplex& D = d.complex;
    std::vector<Angle> theta(D.num_edges(), pi_times(0));
    std::vector<Angle> kappa(D.num_faces(), pi_times(0));
    for (int e = 0; e < x.base.num_edges(); ++e) {
        theta[d.edge_plus[e]] = framed.theta[e];
        theta[d.edge_minus[e]] = framed.theta[e];
    }
    for (int e : x.spoke_edges) theta[d.spoke_edge[e]] = framed.theta[e] * 2;
    for (int f = 0; f < x.base.num_faces(); ++f) {
        kappa[d.face_plus[f]] = framed.kappa[f];
        kappa[d.face_minus[f]] = framed.kappa[f];
    }
    for (const auto& col : x.collars) kappa[d.collar_face[col.face]] = framed.theta[col.boundary_edge] * 2;
    ConditionInstance out = closed_instance(D, framed.geometry, std::move(theta), std::move(kappa));
    for (int f : framed.forced_ideal) {
        if (f < x.base.num_faces()) {
            out.forced_ideal.push_back(d.face_plus[f]);
            out.forced_ideal.push_back(d.face_minus[f]);
        } else {
            out.forced_ideal.push_back(d.collar_face[f]);
        }
    }
    return out;
}

// One way a face not fully contained in a domain meets it: a set of chords
// cutting the face into regions, and the regions on one side of the chords.
struct PartialOption {
    std::vector<std::pair<int, int>> chords;  // corner positions
    std::vector<bool> side_in;                // per side of the face
    std::vector<bool> corner_full;            // per corner of the face
    std::vector<std::vector<int>> pieces;     // sides of each included region
    bool shares_endpoint = false;
};

struct Domain {
    std::vector<int> faces;                           // fully contained faces
    std::vector<std::pair<int, int>> partial;         // (face, option index)
    std::vector<int> inner_edges;                     // edges in the interior of the domain
    std::vector<int> multiplicity;                    // per edge, times it lies in the boundary
    int chi = 0;
    int m = 0;
    int n = 0;
    bool shares_endpoint = false;

    bool single_face() const { return faces.size() == 1 && partial.empty() && inner_edges.empty(); }
};

struct DomainOptions {
    int chord_budget = 2;
    bool prune = true;
    bool disks_only = false;  // chi = 1 and m <= 1
    std::size_t max_domains = 50'000'000;
};

namespace detail {

inline bool chords_cross(std::pair<int, int> a, std::pair<int, int> b) {
    auto [p, q] = a;
    auto [r, s] = b;
    return (p < r && r < q && q < s) || (r < p && p < s && s < q);
}

struct Region {
    std::vector<int> corners;
    std::vector<int> elems;  // >= 0: side index; < 0: -(chord + 1)
};

inline std::vector<PartialOption> partial_options(const CellComplex& c, int f, int budget) {
    const auto& orbit = c.face_half_edges[f];
    const int k = static_cast<int>(orbit.size());
    std::vector<std::pair<int, int>> cand;
    for (int a = 0; a < k; ++a)
        for (int b = a + 2; b < k; ++b) {
            if (a == 0 && b == k - 1) continue;
            if (c.origin[orbit[a]] == c.origin[orbit[b]]) continue;
            cand.emplace_back(a, b);
        }
    std::vector<PartialOption> out;
    std::vector<int> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!pick.empty()) {
            std::vector<std::pair<int, int>> chords;
            for (int i : pick) chords.push_back(cand[i]);
            std::vector<Region> regs(1);
            for (int i = 0; i < k; ++i) {
                regs[0].corners.push_back(i);
                regs[0].elems.push_back(i);
            }
            for (std::size_t j = 0; j < chords.size(); ++j) {
                auto [a, b] = chords[j];
                for (std::size_t r = 0; r < regs.size(); ++r) {
                    auto& cs = regs[r].corners;
                    auto ia = std::find(cs.begin(), cs.end(), a);
                    auto ib = std::find(cs.begin(), cs.end(), b);
                    if (ia == cs.end() || ib == cs.end()) continue;
                    int i = static_cast<int>(ia - cs.begin()), jj = static_cast<int>(ib - cs.begin());
                    if (i > jj) std::swap(i, jj);
                    int n = static_cast<int>(cs.size());
                    Region A, B;
                    for (int t = i; t <= jj; ++t) A.corners.push_back(cs[t]);
                    for (int t = i; t < jj; ++t) A.elems.push_back(regs[r].elems[t]);
                    A.elems.push_back(-static_cast<int>(j) - 1);
                    for (int t = jj; t < n + i + 1; ++t) B.corners.push_back(cs[t % n]);
                    for (int t = jj; t < n + i; ++t) B.elems.push_back(regs[r].elems[t % n]);
                    B.elems.push_back(-static_cast<int>(j) - 1);
                    regs[r] = A;
                    regs.push_back(B);
                    break;
                }
            }
            const int R = static_cast<int>(regs.size());
            std::vector<int> colour(R, -1);
            colour[0] = 0;
            for (bool changed = true; changed;) {
                changed = false;
                for (int r = 0; r < R; ++r) {
                    if (colour[r] < 0) continue;
                    for (int e : regs[r].elems) {
                        if (e >= 0) continue;
                        for (int s = 0; s < R; ++s) {
                            if (s == r || colour[s] >= 0) continue;
                            if (std::find(regs[s].elems.begin(), regs[s].elems.end(), e) != regs[s].elems.end()) {
                                colour[s] = 1 - colour[r];
                                changed = true;
                            }
                        }
                    }
                }
            }
            std::set<int> ends;
            bool shares = false;
            for (auto [a, b] : chords) {
                shares = shares || ends.count(a) || ends.count(b);
                ends.insert(a);
                ends.insert(b);
            }
            for (int keep = 0; keep < 2; ++keep) {
                PartialOption o;
                o.chords = chords;
                o.shares_endpoint = shares;
                o.side_in.assign(k, false);
                o.corner_full.assign(k, true);
                for (int r = 0; r < R; ++r) {
                    bool in = colour[r] == keep;
                    if (in) {
                        std::vector<int> sides;
                        for (int e : regs[r].elems)
                            if (e >= 0) sides.push_back(e);
                        o.pieces.push_back(sides);
                    }
                    for (int e : regs[r].elems)
                        if (e >= 0) o.side_in[e] = in;
                    if (!in)
                        for (int cn : regs[r].corners) o.corner_full[cn] = false;
                }
                out.push_back(o);
            }
        }
        if (static_cast<int>(pick.size()) == budget) return;
        for (std::size_t i = start; i < cand.size(); ++i) {
            bool ok = true;
            for (int p : pick) ok = ok && !chords_cross(cand[p], cand[i]);
            if (!ok) continue;
            pick.push_back(static_cast<int>(i));
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace detail

// Streams admissible domains in a deterministic order: by number of
// contained faces, then lexicographically, then by chord configuration and
// inner edge set. The callback returns false to stop. An optional kappa
// vector enables pruning of domains whose right-hand side cannot be positive.
class DomainEnumerator {
public:
    DomainEnumerator(const CellComplex& c, DomainOptions opt, std::vector<double> kappa = {})
        : c_(c), opt_(opt), kappa_(std::move(kappa)) {
        if (kappa_.empty()) {
            kappa_.assign(c.num_faces(), 0.0);
            opt_.prune = false;
        }
        for (int f = 0; f < c.num_faces(); ++f) options_.push_back(detail::partial_options(c, f, opt.chord_budget));
        pos_in_face_.assign(c.num_half_edges(), 0);
        for (int f = 0; f < c.num_faces(); ++f)
            for (std::size_t i = 0; i < c.face_half_edges[f].size(); ++i) pos_in_face_[c.face_half_edges[f][i]] = static_cast<int>(i);
        vertex_out_.resize(c.num_vertices);
        for (int h = 0; h < c.num_half_edges(); ++h) vertex_out_[c.origin[h]].push_back(h);
    }

    const std::vector<std::vector<PartialOption>>& options() const { return options_; }
    std::size_t emitted() const { return emitted_; }

    void run(const std::function<bool(const Domain&)>& cb) {
        const int F = c_.num_faces();
        cb_ = &cb;
        stop_ = false;
        for (int p = 1; p <= F && !stop_; ++p) {
            std::vector<int> S;
            combos(0, p, S);
        }
    }

private:
    const CellComplex& c_;
    DomainOptions opt_;
    std::vector<double> kappa_;
    std::vector<std::vector<PartialOption>> options_;
    std::vector<int> pos_in_face_;
    std::vector<std::vector<int>> vertex_out_;
    const std::function<bool(const Domain&)>* cb_ = nullptr;
    bool stop_ = false;
    std::size_t emitted_ = 0;
    std::unordered_set<std::string> seen_;

    // state for the current S
    std::vector<char> in_s_;
    std::vector<int> choice_;  // per face: -1 none, else option index
    double ks_ = 0.0;

    void combos(int start, int left, std::vector<int>& S) {
        if (stop_) return;
        if (left == 0) {
            process(S);
            return;
        }
        for (int f = start; f <= c_.num_faces() - left; ++f) {
            S.push_back(f);
            combos(f + 1, left - 1, S);
            S.pop_back();
            if (stop_) return;
        }
    }

    int max_chords() const {
        int budget = opt_.disks_only ? 1 : 1 << 20;
        if (!opt_.prune) return budget;
        double b = 2.0 - ks_ / kPi + 1e-7;
        return std::min(budget, static_cast<int>(std::floor(b)));
    }

    void process(const std::vector<int>& S) {
        in_s_.assign(c_.num_faces(), 0);
        ks_ = 0.0;
        for (int f : S) {
            in_s_[f] = 1;
            ks_ += kappa_[f];
        }
        if (opt_.prune && 2.0 * kPi - ks_ < -1e-7) return;
        choice_.assign(c_.num_faces(), -1);
        choose_partial(0, 0, S);
    }

    void choose_partial(int f, int chords, const std::vector<int>& S) {
        if (stop_) return;
        if (f == c_.num_faces()) {
            leaf(S, chords);
            return;
        }
        choose_partial(f + 1, chords, S);
        if (in_s_[f]) return;
        int cap = max_chords();
        for (std::size_t i = 0; i < options_[f].size() && !stop_; ++i) {
            int add = static_cast<int>(options_[f][i].chords.size());
            if (chords + add > cap) continue;
            choice_[f] = static_cast<int>(i);
            choose_partial(f + 1, chords + add, S);
            choice_[f] = -1;
        }
    }

    // Piece index of the side of half-edge h, or -1 when outside the domain.
    int side_piece(int h, const std::vector<int>& face_piece, const std::vector<std::vector<int>>& side_piece_of) const {
        int f = c_.face_of[h];
        if (in_s_[f]) return face_piece[f];
        if (choice_[f] < 0) return -1;
        return side_piece_of[f][pos_in_face_[h]];
    }

    bool corner_full(int h) const {
        int f = c_.face_of[h];
        if (in_s_[f]) return true;
        if (choice_[f] < 0) return false;
        return options_[f][choice_[f]].corner_full[pos_in_face_[h]];
    }

    void leaf(const std::vector<int>& S, int chords) {
        const int F = c_.num_faces();
        const int E = c_.num_edges();
        int pieces = 0;
        std::vector<int> face_piece(F, -1);
        std::vector<std::vector<int>> side_piece_of(F);
        bool any_partial = false;
        bool shares = false;
        for (int f = 0; f < F; ++f) {
            if (in_s_[f]) {
                face_piece[f] = pieces++;
            } else if (choice_[f] >= 0) {
                any_partial = true;
                const auto& o = options_[f][choice_[f]];
                shares = shares || o.shares_endpoint;
                side_piece_of[f].assign(c_.face_half_edges[f].size(), -1);
                for (const auto& sides : o.pieces) {
                    for (int s : sides) side_piece_of[f][s] = pieces;
                    ++pieces;
                }
            }
        }
        std::vector<int> cand;
        std::vector<std::array<int, 2>> cand_pieces;
        std::vector<int> sides_in(E, 0);
        for (int e = 0; e < E; ++e) {
            int h = c_.edge_half_edge[e];
            int t = c_.twin[h];
            int ph = side_piece(h, face_piece, side_piece_of);
            int pt = t == kNone ? -1 : side_piece(t, face_piece, side_piece_of);
            sides_in[e] = (ph >= 0) + (pt >= 0);
            if (ph >= 0 && pt >= 0) {
                cand.push_back(e);
                cand_pieces.push_back({ph, pt});
            }
        }
        // Regions not touching any candidate edge can only be connected if
        // they are the sole piece.
        std::vector<char> inner(E, 0);
        std::vector<int> inner_list;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (stop_) return;
            if (i == cand.size()) {
                finish(S, chords, pieces, inner, inner_list, sides_in, cand, cand_pieces, any_partial, shares);
                return;
            }
            rec(i + 1);
            inner[cand[i]] = 1;
            inner_list.push_back(cand[i]);
            rec(i + 1);
            inner_list.pop_back();
            inner[cand[i]] = 0;
        };
        rec(0);
    }

    void finish(const std::vector<int>& S, int chords, int pieces, const std::vector<char>& inner,
                const std::vector<int>& inner_list, const std::vector<int>& sides_in, const std::vector<int>& cand,
                const std::vector<std::array<int, 2>>& cand_pieces, bool any_partial, bool shares) {
        const int E = c_.num_edges();
        if (!any_partial && static_cast<int>(S.size()) == c_.num_faces() && inner_list.size() == cand.size()) return;
        detail::UnionFind uf(pieces);
        int comps = pieces;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (!inner[cand[i]]) continue;
            int a = uf.find(cand_pieces[i][0]), b = uf.find(cand_pieces[i][1]);
            if (a != b) {
                uf.unite(a, b);
                --comps;
            }
        }
        if (comps != 1) return;
        int vin = 0;
        for (int v = 0; v < c_.num_vertices; ++v) {
            bool interior = true;
            for (int h : vertex_out_[v]) {
                if (c_.twin[h] == kNone || c_.twin[c_.prev[h]] == kNone || !corner_full(h) || !inner[c_.edge_of[h]]) {
                    interior = false;
                    break;
                }
            }
            vin += interior ? 1 : 0;
        }
        Domain d;
        d.chi = vin - static_cast<int>(inner_list.size()) + pieces;
        d.m = chords;
        if (opt_.disks_only && (d.chi != 1 || d.m > 1)) return;
        d.multiplicity.assign(E, 0);
        for (int e = 0; e < E; ++e) d.multiplicity[e] = inner[e] ? 0 : sides_in[e];
        int a_edges = 0, joints = 0;
        for (const auto& cyc : c_.boundary_cycles) {
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                int e = c_.edge_of[cyc[i]];
                if (sides_in[e] == 0) continue;
                ++a_edges;
                int en = c_.edge_of[cyc[(i + 1) % cyc.size()]];
                if (sides_in[en] == 0) continue;
                int v = c_.head(cyc[i]);
                bool joint = true;
                for (int h : vertex_out_[v]) {
                    if (!corner_full(h)) joint = false;
                    if (c_.twin[h] != kNone && !inner[c_.edge_of[h]]) joint = false;
                }
                joints += joint ? 1 : 0;
            }
        }
        d.n = a_edges - joints;
        d.faces = S;
        for (int f = 0; f < c_.num_faces(); ++f)
            if (choice_[f] >= 0) d.partial.emplace_back(f, choice_[f]);
        d.inner_edges = inner_list;
        std::sort(d.inner_edges.begin(), d.inner_edges.end());
        d.shares_endpoint = shares;
        std::string key;
        for (int f : S) key += std::to_string(f) + ",";
        key += "|";
        for (int x : d.multiplicity) key += static_cast<char>('0' + x);
        key += "|" + std::to_string(d.chi) + "|" + std::to_string(d.m) + "|" + std::to_string(d.n);
        if (!seen_.insert(key).second) return;
        ++emitted_;
        if (emitted_ > opt_.max_domains)
            throw Error("BudgetExceeded", "domain enumeration exceeded its limit", {{"count", emitted_ - 1}});
        if (!(*cb_)(d)) stop_ = true;
    }
};

struct Verdict {
    bool accepted = false;
    std::vector<int> ideal_faces;
    std::string reason;
    std::string message;
    Json witness = Json::object();
    std::size_t domains_checked = 0;
    std::size_t shared_endpoint_domains = 0;
    Json flags = Json::object();
};

struct CheckOptions {
    DomainOptions domains;
    FramedReading framed_reading = FramedReading::euler_characteristic;
    double tol = 1e-9;
};

namespace detail {

// Exact integer arithmetic in units of pi/L when every input is a rational
// multiple of pi; floating point otherwise.
struct Scale {
    bool exact = false;
    std::int64_t L = 1;

    explicit Scale(const std::vector<const Angle*>& all) {
        exact = true;
        for (const Angle* a : all) exact = exact && a->is_exact();
        if (!exact) return;
        for (const Angle* a : all) {
            std::int64_t d = a->pi_multiple->denominator();
            L = std::lcm(L, d);
            if (L > (std::int64_t(1) << 40)) {
                exact = false;
                return;
            }
        }
    }
    double value(const Angle& a) const {
        if (!exact) return a.value;
        const Rational& q = *a.pi_multiple;
        return static_cast<double>(q.numerator() * (L / q.denominator()));
    }
    double pi() const { return exact ? static_cast<double>(L) : kPi; }
    int cmp(double x, double y, double tol) const {
        if (exact) return x < y ? -1 : (x > y ? 1 : 0);
        return x < y - tol ? -1 : (x > y + tol ? 1 : 0);
    }
    double to_radians(double x) const { return exact ? x / static_cast<double>(L) * kPi : x; }
};

}  // namespace detail

inline Json domain_to_json(const Domain& d, const std::vector<std::vector<PartialOption>>& opts) {
    Json j;
    j["faces"] = d.faces;
    Json parts = Json::array();
    for (auto [f, o] : d.partial) {
        Json p;
        p["face"] = f;
        Json ch = Json::array();
        for (auto [a, b] : opts[f][o].chords) ch.push_back({a, b});
        p["chords"] = ch;
        parts.push_back(p);
    }
    j["partial_faces"] = parts;
    j["inner_edges"] = d.inner_edges;
    Json mult = Json::object();
    for (std::size_t e = 0; e < d.multiplicity.size(); ++e)
        if (d.multiplicity[e] > 0) mult[std::to_string(e)] = d.multiplicity[e];
    j["boundary_edges"] = mult;
    j["chi"] = d.chi;
    j["m"] = d.m;
    j["n"] = d.n;
    j["chords_share_endpoint"] = d.shares_endpoint;
    return j;
}

inline Verdict check_conditions(const ConditionInstance& in, const CheckOptions& opt = {}) {
    const CellComplex& c = in.complex;
    Verdict v;
    v.flags["chord_budget"] = opt.domains.chord_budget;
    v.flags["framed_reading"] = opt.framed_reading == FramedReading::two_pi ? "two_pi" : "euler_characteristic";
    auto reject = [&](std::string reason, std::string msg, Json w) {
        v.accepted = false;
        v.reason = std::move(reason);
        v.message = std::move(msg);
        v.witness = std::move(w);
        return v;
    };
    if (static_cast<int>(in.theta.size()) != c.num_edges() || static_cast<int>(in.kappa.size()) != c.num_faces())
        throw Error("MalformedAngles", "angle data does not match the complex",
                    {{"edges", c.num_edges()}, {"faces", c.num_faces()}, {"theta", in.theta.size()}, {"kappa", in.kappa.size()}});
    if (in.framed == c.closed())
        throw Error("MalformedAngles", "framed flag does not match boundary presence", {{"framed", in.framed}});

    std::vector<const Angle*> all;
    for (const auto& a : in.theta) all.push_back(&a);
    for (const auto& a : in.kappa) all.push_back(&a);
    Angle zero = pi_times(0), pi = pi_times(1), half_pi = pi_times(1, 2), two_pi = pi_times(2);
    all.push_back(&zero);
    all.push_back(&pi);
    detail::Scale sc(all);

    for (int e = 0; e < c.num_edges(); ++e) {
        if (compare(in.theta[e], zero, 0.0) <= 0 || compare(in.theta[e], pi, 0.0) >= 0)
            return reject("ThetaOutOfRange", "intersection angle outside (0, pi)",
                          {{"edge", e}, {"theta", in.theta[e].value}});
    }
    for (int e : in.spoke_edges) {
        if (compare(in.theta[e], half_pi, 0.0) >= 0)
            return reject("ThetaOutOfRange", "boundary angle must be below pi/2",
                          {{"edge", e}, {"theta", in.theta[e].value}});
    }
    for (int f = 0; f < c.num_faces(); ++f) {
        if (in.kappa_face[f] && compare(in.kappa[f], two_pi, 0.0) >= 0)
            return reject("KappaOutOfRange", "singular curvature not below 2 pi", {{"face", f}, {"kappa", in.kappa[f].value}});
        if (c.face_half_edges[f].size() < 3)
            return reject("DegenerateFace", "face has fewer than three sides",
                          {{"face", f}, {"sides", c.face_half_edges[f].size()}});
    }

    // Condition (1).
    double sum_kappa = 0.0;
    for (int f = 0; f < c.num_faces(); ++f)
        if (in.kappa_face[f]) sum_kappa += sc.value(in.kappa[f]);
    double sum_boundary = 0.0;
    for (int e : in.boundary_edges) sum_boundary += sc.value(in.theta[e]);
    int chi = c.euler_characteristic();
    double rhs1 = 2.0 * chi * sc.pi() - sum_boundary;
    if (in.framed && in.geometry == Geometry::hyperbolic && opt.framed_reading == FramedReading::two_pi)
        rhs1 = 2.0 * sc.pi() - sum_boundary;
    int cmp1 = sc.cmp(sum_kappa, rhs1, opt.tol);
    bool cond1 = in.geometry == Geometry::euclidean ? cmp1 == 0 : cmp1 > 0;
    if (!cond1) {
        return reject("GaussBonnetMismatch",
                      in.geometry == Geometry::euclidean ? "total curvature must equal the Euler term"
                                                         : "total curvature must exceed the Euler term",
                      {{"sum_kappa", sc.to_radians(sum_kappa)},
                       {"required", sc.to_radians(rhs1)},
                       {"relation", in.geometry == Geometry::euclidean ? "==" : ">"},
                       {"euler_characteristic", chi}});
    }

    std::vector<double> kappa_num(c.num_faces(), 0.0);
    std::vector<double> kappa_rad(c.num_faces(), 0.0);
    for (int f = 0; f < c.num_faces(); ++f)
        if (in.kappa_face[f]) {
            kappa_num[f] = sc.value(in.kappa[f]);
            kappa_rad[f] = in.kappa[f].value;
        }
    std::vector<double> theta_num(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e) theta_num[e] = sc.value(in.theta[e]);

    DomainEnumerator en(c, opt.domains, kappa_rad);
    std::set<int> ideal;
    bool violated = false;
    Json witness;
    std::string why;
    en.run([&](const Domain& d) {
        ++v.domains_checked;
        if (d.shares_endpoint) ++v.shared_endpoint_domains;
        double lhs = 0.0;
        for (std::size_t e = 0; e < d.multiplicity.size(); ++e) lhs += d.multiplicity[e] * theta_num[e];
        double ks = 0.0;
        for (int f : d.faces) ks += kappa_num[f];
        double rhs = (2.0 * d.chi - d.m - d.n) * sc.pi() - ks;
        int cmp = sc.cmp(lhs, rhs, opt.tol);
        if (cmp > 0) return true;
        if (cmp == 0 && d.single_face()) {
            ideal.insert(d.faces[0]);
            return true;
        }
        violated = true;
        why = cmp < 0 ? "inequality fails" : "equality on a domain that is not a single face";
        witness = domain_to_json(d, en.options());
        witness["lhs"] = sc.to_radians(lhs);
        witness["rhs"] = sc.to_radians(rhs);
        return false;
    });
    if (violated) return reject("DomainViolation", why, witness);
    for (int f : in.forced_ideal) {
        if (!ideal.count(f))
            return reject("ForcedIdealMismatch", "face declared ideal does not achieve equality", {{"face", f}});
    }
    v.accepted = true;
    v.ideal_faces.assign(ideal.begin(), ideal.end());
    return v;
}

// True iff the angles around an ideal dual circle sum to its cone angle.
inline bool bouquet_check(const std::vector<double>& theta, double kappa, double tol = 1e-9) {
    double s = std::accumulate(theta.begin(), theta.end(), 0.0);
    return std::abs(s - (2.0 * kPi - kappa)) <= tol;
}

inline Json verdict_to_json(const Verdict& v) {
    Json j;
    j["verdict"] = v.accepted ? "accepted" : "rejected";
    if (v.accepted) {
        j["ideal_faces"] = v.ideal_faces;
    } else {
        j["reason"] = v.reason;
        j["message"] = v.message;
        j["witness"] = v.witness;
    }
    j["domains_checked"] = v.domains_checked;
    j["shared_endpoint_domains"] = v.shared_endpoint_domains;
    j["flags"] = v.flags;
    return j;
}

}  // namespace hyperpat
