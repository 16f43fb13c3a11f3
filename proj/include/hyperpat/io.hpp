// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/conditions.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hyperpat {

// Serializes with floating-point values at 17 significant digits and object
// keys in sorted order, so equal values produce identical bytes.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int depth = 0) {
    auto pad = [&](int d) { return std::string(static_cast<std::size_t>(indent * d), ' '); };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad(depth + 1) << Json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent, depth + 1);
        }
        os << "\n" << pad(depth) << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << pad(depth + 1);
            write_json(os, j[i], indent, depth + 1);
        }
        os << "\n" << pad(depth) << "]";
        return;
    }
    case Json::value_t::number_float: {
        double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        std::string s = buf;
        if (s.find_first_of(".en") == std::string::npos) s += ".0";
        os << s;
        return;
    }
    default:
        os << j.dump();
    }
}

inline std::string json_text(const Json& j) {
    std::ostringstream os;
    write_json(os, j);
    os << "\n";
    return os.str();
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open file", {{"path", path}});
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error("ParseError", e.what(), {{"path", path}});
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write file", {{"path", path}});
    out << text;
}

inline Json instance_to_json(const CellComplex& c) {
    Json j;
    j["surface"] = {{"genus", c.genus()}, {"boundary_components", c.boundary_components()}};
    Json verts = Json::array();
    for (int v = 0; v < c.num_vertices; ++v) {
        if (v < static_cast<int>(c.vertex_labels.size()) && !c.vertex_labels[v].empty())
            verts.push_back(c.vertex_labels[v]);
        else
            verts.push_back(v);
    }
    j["vertices"] = verts;
    Json hs = Json::array();
    for (int h = 0; h < c.num_half_edges(); ++h) {
        Json e = {{"origin", c.origin[h]}, {"next", c.next[h]}};
        e["twin"] = c.twin[h] == kNone ? Json(nullptr) : Json(c.twin[h]);
        hs.push_back(e);
    }
    j["half_edges"] = hs;
    Json labels = Json::object();
    for (std::size_t f = 0; f < c.face_labels.size(); ++f)
        if (!c.face_labels[f].empty()) labels[std::to_string(f)] = c.face_labels[f];
    j["face_labels"] = labels;
    return j;
}

inline CellComplex instance_from_json(const Json& j) {
    try {
        int nv = 0;
        const Json& v = j.at("vertices");
        if (v.is_number_integer())
            nv = v.get<int>();
        else
            nv = static_cast<int>(v.size());
        std::vector<int> origin, next, twin;
        for (const auto& h : j.at("half_edges")) {
            origin.push_back(h.at("origin").get<int>());
            next.push_back(h.at("next").get<int>());
            const Json& t = h.contains("twin") ? h.at("twin") : Json(nullptr);
            twin.push_back(t.is_null() ? kNone : t.get<int>());
        }
        std::optional<SurfaceDeclaration> decl;
        if (j.contains("surface"))
            decl = SurfaceDeclaration{j["surface"].value("genus", 0), j["surface"].value("boundary_components", 0)};
        CellComplex c = build_complex(nv, origin, next, twin, decl);
        c.face_labels.resize(c.num_faces());
        if (v.is_array() && std::any_of(v.begin(), v.end(), [](const Json& x) { return x.is_string(); })) {
            c.vertex_labels.resize(nv);
            for (int i = 0; i < nv; ++i) c.vertex_labels[i] = v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
        }
        if (j.contains("face_labels"))
            for (auto it = j["face_labels"].begin(); it != j["face_labels"].end(); ++it) {
                int f = std::stoi(it.key());
                if (f < 0 || f >= c.num_faces()) throw Error("MalformedComplex", "face label for unknown face", {{"face", f}});
                c.face_labels[f] = it.value().get<std::string>();
            }
        return c;
    } catch (const Json::exception& e) {
        throw Error("ParseError", std::string("instance: ") + e.what());
    }
}

// Angle data on a complex: theta on every edge (of the extended graph when
// the surface has boundary), kappa on every face (default 0).
struct AngleData {
    Geometry geometry = Geometry::euclidean;
    std::vector<Angle> theta;
    std::vector<Angle> kappa;
    std::vector<int> ideal_faces;  // optional forced ideal set
    bool has_ideal_faces = false;
};

inline Json angles_to_json(const AngleData& a) {
    Json j;
    j["geometry"] = geometry_name(a.geometry);
    Json th = Json::object(), ka = Json::object();
    for (std::size_t e = 0; e < a.theta.size(); ++e) th[std::to_string(e)] = angle_to_json(a.theta[e]);
    for (std::size_t f = 0; f < a.kappa.size(); ++f) ka[std::to_string(f)] = angle_to_json(a.kappa[f]);
    j["theta"] = th;
    j["kappa"] = ka;
    if (a.has_ideal_faces) j["ideal_faces"] = a.ideal_faces;
    return j;
}

inline std::vector<Angle> angle_map(const Json& j, int count, const char* what, bool required) {
    std::vector<Angle> out(count, pi_times(0));
    std::vector<bool> seen(count, false);
    if (!j.is_null()) {
        if (j.is_array()) {
            if (static_cast<int>(j.size()) != count)
                throw Error("MalformedAngles", std::string(what) + " array has the wrong length",
                            {{"expected", count}, {"found", j.size()}});
            for (int i = 0; i < count; ++i) {
                out[i] = angle_from_json(j[i]);
                seen[i] = true;
            }
        } else {
            for (auto it = j.begin(); it != j.end(); ++it) {
                int id = -1;
                try {
                    id = std::stoi(it.key());
                } catch (const std::exception&) {
                }
                if (id < 0 || id >= count)
                    throw Error("MalformedAngles", std::string(what) + " key is not a valid id", {{"key", it.key()}});
                out[id] = angle_from_json(it.value());
                seen[id] = true;
            }
        }
    }
    if (required)
        for (int i = 0; i < count; ++i)
            if (!seen[i]) throw Error("MalformedAngles", std::string(what) + " missing", {{"id", i}});
    return out;
}

// theta_count is the number of edges of the complex, or of its extended
// graph for surfaces with boundary.
inline AngleData angles_from_json(const Json& j, int theta_count, int kappa_count) {
    AngleData a;
    a.geometry = parse_geometry(j.value("geometry", std::string("euclidean")));
    a.theta = angle_map(j.contains("theta") ? j["theta"] : Json(nullptr), theta_count, "theta", true);
    a.kappa = angle_map(j.contains("kappa") ? j["kappa"] : Json(nullptr), kappa_count, "kappa", false);
    if (j.contains("ideal_faces")) {
        a.has_ideal_faces = true;
        a.ideal_faces = j["ideal_faces"].get<std::vector<int>>();
    }
    return a;
}

// A complex with its angle data; framed when the surface has boundary.
struct Problem {
    CellComplex complex;
    AngleData angles;
    bool framed() const { return !complex.closed(); }
};

inline ConditionInstance problem_instance(const Problem& p) {
    ConditionInstance in = p.framed()
                               ? framed_instance(extended_graph(p.complex), p.angles.geometry, p.angles.theta, p.angles.kappa)
                               : closed_instance(p.complex, p.angles.geometry, p.angles.theta, p.angles.kappa);
    if (p.angles.has_ideal_faces) in.forced_ideal = p.angles.ideal_faces;
    return in;
}

inline Json problem_to_json(const Problem& p) { return {{"instance", instance_to_json(p.complex)}, {"angles", angles_to_json(p.angles)}}; }

// Reads either a combined document {"instance": ..., "angles": ...} or an
// instance and a separate angle file.
inline Problem problem_from_json(const Json& instance, const Json* angles = nullptr) {
    const Json& inst = instance.contains("instance") ? instance.at("instance") : instance;
    const Json* ang = angles;
    if (!ang) {
        if (!instance.contains("angles")) throw Error("MalformedAngles", "no angle data given");
        ang = &instance.at("angles");
    }
    Problem p;
    p.complex = instance_from_json(inst);
    int ne = p.complex.closed() ? p.complex.num_edges() : extended_graph(p.complex).ext.num_edges();
    p.angles = angles_from_json(*ang, ne, p.complex.num_faces());
    return p;
}

}  // namespace hyperpat
