// Copyright 2026 The hyperpat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyperpat/reconstruct.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace hyperpat {

struct SvgOptions {
    int size = 1024;
    int circle_segments = 96;
    double margin = 0.05;
};

namespace detail {

inline std::string fmt6(double v) {
    if (std::abs(v) < 5e-7) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct SvgFrame {
    double x0 = -1.0, y0 = -1.0, span = 2.0;
    int size = 1024;
    std::array<double, 2> map(double x, double y) const {
        double s = size / span;
        return {(x - x0) * s, size - (y - y0) * s};
    }
    double len(double r) const { return r * size / span; }
};

}  // namespace detail

// Renders a pattern from its JSON form: Euclidean patterns in the plane,
// hyperbolic ones in the Klein disk with circles drawn as polylines.
inline std::string render_svg(const Json& pattern, const SvgOptions& opt = {}) {
    using detail::fmt6;
    PlaneModel pm;
    pm.hyperbolic = pattern.at("geometry").get<std::string>() == "hyperbolic";
    detail::SvgFrame fr;
    fr.size = opt.size;
    if (pm.hyperbolic) {
        fr.x0 = fr.y0 = -1.0 - opt.margin;
        fr.span = 2.0 + 2.0 * opt.margin;
    } else {
        double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
        auto grow = [&](double x, double y, double r) {
            lo[0] = std::min(lo[0], x - r);
            lo[1] = std::min(lo[1], y - r);
            hi[0] = std::max(hi[0], x + r);
            hi[1] = std::max(hi[1], y + r);
        };
        for (const auto& ch : pattern.at("charts")) {
            for (const auto& q : ch.at("polygon")) grow(q[0].get<double>(), q[1].get<double>(), 0.0);
            const auto& pr = ch.at("principal");
            grow(pr.at("center")[0].get<double>(), pr.at("center")[1].get<double>(), pr.at("radius").get<double>());
        }
        if (lo[0] > hi[0]) lo[0] = lo[1] = -1.0, hi[0] = hi[1] = 1.0;
        double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
        if (!(span > 0.0)) span = 1.0;
        double pad = span * opt.margin;
        fr.span = span + 2.0 * pad;
        fr.x0 = 0.5 * (lo[0] + hi[0]) - 0.5 * fr.span;
        fr.y0 = 0.5 * (lo[1] + hi[1]) - 0.5 * fr.span;
    }

    std::ostringstream out;
    auto pt = [&](double x, double y) {
        auto p = fr.map(x, y);
        return fmt6(p[0]) + "," + fmt6(p[1]);
    };
    auto circle = [&](const Json& center, double r, const std::string& cls, const std::string& extra) {
        double cx = center[0].get<double>(), cy = center[1].get<double>();
        if (!pm.hyperbolic) {
            auto p = fr.map(cx, cy);
            out << "  <circle class=\"" << cls << "\" cx=\"" << fmt6(p[0]) << "\" cy=\"" << fmt6(p[1]) << "\" r=\""
                << fmt6(fr.len(r)) << "\"" << extra << "/>\n";
            return;
        }
        Pt c = pm.point(cx, cy);
        out << "  <polyline class=\"" << cls << "\" points=\"";
        for (int i = 0; i <= opt.circle_segments; ++i) {
            auto q = pm.xy(pm.circle_point(c, r, 2.0 * kPi * i / opt.circle_segments));
            out << (i ? " " : "") << pt(q[0], q[1]);
        }
        out << "\"" << extra << "/>\n";
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << opt.size << " " << opt.size << "\" width=\""
        << opt.size << "\" height=\"" << opt.size << "\">\n";
    out << "  <style>.chart{fill:#e8eef7;stroke:#5a6b85;stroke-width:1}"
           ".principal{fill:none;stroke:#c0392b;stroke-width:1.5}"
           ".dual{fill:none;stroke:#2471a3;stroke-width:1;stroke-dasharray:6 4}"
           ".disk{fill:none;stroke:#000;stroke-width:1}"
           ".cone-point{fill:#117a65}.ideal-point{fill:#2471a3}"
           "text{font-family:sans-serif;font-size:12px}</style>\n";
    if (pm.hyperbolic) {
        auto c = fr.map(0.0, 0.0);
        out << "  <circle class=\"disk\" cx=\"" << fmt6(c[0]) << "\" cy=\"" << fmt6(c[1]) << "\" r=\"" << fmt6(fr.len(1.0))
            << "\"/>\n";
    }
    for (const auto& ch : pattern.at("charts")) {
        out << "  <polygon class=\"chart\" data-vertex=\"" << ch.at("vertex").get<int>() << "\" points=\"";
        bool first = true;
        for (const auto& q : ch.at("polygon")) {
            out << (first ? "" : " ") << pt(q[0].get<double>(), q[1].get<double>());
            first = false;
        }
        out << "\"/>\n";
    }
    for (const auto& ch : pattern.at("charts")) {
        const auto& pr = ch.at("principal");
        circle(pr.at("center"), pr.at("radius").get<double>(), "principal",
               " data-vertex=\"" + std::to_string(ch.at("vertex").get<int>()) + "\"");
    }
    for (const auto& dc : pattern.at("dual_circles")) {
        std::string tag = " data-face=\"" + std::to_string(dc.at("face").get<int>()) + "\"";
        if (dc.value("ideal", false)) {
            auto p = fr.map(dc.at("center")[0].get<double>(), dc.at("center")[1].get<double>());
            out << "  <circle class=\"ideal-point\" cx=\"" << fmt6(p[0]) << "\" cy=\"" << fmt6(p[1]) << "\" r=\"3.000000\""
                << tag << "/>\n";
        } else {
            circle(dc.at("center"), dc.at("radius").get<double>(), "dual", tag);
        }
    }
    for (const auto& dc : pattern.at("dual_circles")) {
        double kappa = 2.0 * kPi - dc.at("cone_angle").get<double>();
        if (std::abs(kappa) < 1e-9) continue;
        auto p = fr.map(dc.at("center")[0].get<double>(), dc.at("center")[1].get<double>());
        out << "  <circle class=\"cone-point\" cx=\"" << fmt6(p[0]) << "\" cy=\"" << fmt6(p[1]) << "\" r=\"4.000000\"/>\n";
        out << "  <text x=\"" << fmt6(p[0] + 6.0) << "\" y=\"" << fmt6(p[1] - 6.0) << "\">" << fmt6(kappa / kPi)
            << "&#960;</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hyperpat
