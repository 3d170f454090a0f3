#pragma once

// Plain-text fixture format for flat surfaces with curve and annulus
// annotations:
//
//   # comment
//   name <label>
//   polygon <id> <x,y> <x,y> ...          edge vectors, counterclockwise
//   pair <P.i> <Q.j> <-|+>                '-' translation, '+' point reflection
//   cylinder <id> <poly> <circ> <height>
//   curve <name> <poly> <x,y> [taut] seg <x,y> [cross <cyl>:<n> ...] ...
//   annulus <id> <curve> <poly> <x_lo> <x_hi>
//
// All numbers are integers or fractions p/q. Polygons must be declared
// before anything that references them.

#include "teich/bounds.hpp"
#include "teich/curves.hpp"
#include "teich/errors.hpp"
#include "teich/surface.hpp"
#include "teich/tracer.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace teich {

struct Fixture {
    FlatSurface surface;
    std::vector<CurveClass> curves;
    std::vector<Annulus> annuli;

    const CurveClass* find_curve(const std::string& name) const {
        for (const CurveClass& c : curves)
            if (c.name == name) return &c;
        return nullptr;
    }

    const Annulus* find_annulus_for(const std::string& curve_name) const {
        for (const Annulus& a : annuli)
            if (a.curve == curve_name) return &a;
        return nullptr;
    }
};

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
    throw TeichError(Err::ParseError, "line " + std::to_string(line) + ": " + msg);
}

inline Rat need_rat(const std::string& tok, int line) {
    auto r = parse_rat(tok);
    if (!r) parse_fail(line, "expected a rational number, got '" + tok + "'");
    return *r;
}

inline RVec need_vec(const std::string& tok, int line) {
    auto comma = tok.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == tok.size())
        parse_fail(line, "expected a coordinate pair x,y, got '" + tok + "'");
    return {need_rat(tok.substr(0, comma), line), need_rat(tok.substr(comma + 1), line)};
}

inline EdgeRef need_edge(const FlatSurface& s, const std::string& tok, int line) {
    auto dot_pos = tok.rfind('.');
    if (dot_pos == std::string::npos || dot_pos == 0 || dot_pos + 1 == tok.size())
        parse_fail(line, "expected an edge reference POLY.INDEX, got '" + tok + "'");
    std::string poly_id = tok.substr(0, dot_pos);
    int poly = s.find_polygon(poly_id);
    if (poly < 0) parse_fail(line, "unknown polygon '" + poly_id + "'");
    const std::string idx = tok.substr(dot_pos + 1);
    for (char ch : idx)
        if (ch < '0' || ch > '9') parse_fail(line, "bad edge index '" + idx + "'");
    int edge = std::stoi(idx);
    if (edge >= s.polygons[poly].size())
        parse_fail(line, "polygon '" + poly_id + "' has no edge " + idx);
    return {poly, edge};
}

inline int need_poly(const FlatSurface& s, const std::string& tok, int line) {
    int poly = s.find_polygon(tok);
    if (poly < 0) parse_fail(line, "unknown polygon '" + tok + "'");
    return poly;
}

}  // namespace detail

inline Fixture parse_fixture(std::istream& in) {
    Fixture f;
    std::string raw;
    int line_no = 0;
    bool saw_name = false;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::vector<std::string> tok;
        for (std::string t; line >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& kind = tok[0];

        if (kind == "name") {
            if (tok.size() != 2) detail::parse_fail(line_no, "usage: name <label>");
            if (saw_name) detail::parse_fail(line_no, "duplicate name line");
            f.surface.name = tok[1];
            saw_name = true;
        } else if (kind == "polygon") {
            if (tok.size() < 2) detail::parse_fail(line_no, "usage: polygon <id> <x,y> ...");
            if (f.surface.find_polygon(tok[1]) >= 0)
                detail::parse_fail(line_no, "duplicate polygon '" + tok[1] + "'");
            Polygon p;
            p.id = tok[1];
            for (std::size_t i = 2; i < tok.size(); ++i)
                p.edges.push_back(detail::need_vec(tok[i], line_no));
            if (p.edges.size() < 3)
                detail::parse_fail(line_no, "polygon needs at least 3 edges");
            f.surface.polygons.push_back(std::move(p));
        } else if (kind == "pair") {
            if (tok.size() != 4 || (tok[3] != "-" && tok[3] != "+"))
                detail::parse_fail(line_no, "usage: pair <P.i> <Q.j> <-|+>");
            Pairing pr;
            pr.a = detail::need_edge(f.surface, tok[1], line_no);
            pr.b = detail::need_edge(f.surface, tok[2], line_no);
            pr.flip = tok[3] == "+";
            f.surface.pairings.push_back(pr);
        } else if (kind == "cylinder") {
            if (tok.size() != 5)
                detail::parse_fail(line_no, "usage: cylinder <id> <poly> <circ> <height>");
            Cylinder c;
            c.id = tok[1];
            if (f.surface.find_cylinder(c.id) != nullptr)
                detail::parse_fail(line_no, "duplicate cylinder '" + c.id + "'");
            c.poly = detail::need_poly(f.surface, tok[2], line_no);
            c.circumference = detail::need_rat(tok[3], line_no);
            c.height = detail::need_rat(tok[4], line_no);
            f.surface.cylinders.push_back(std::move(c));
        } else if (kind == "curve") {
            if (tok.size() < 4)
                detail::parse_fail(line_no,
                                   "usage: curve <name> <poly> <x,y> [taut] seg <x,y> ...");
            CurveClass c;
            c.name = tok[1];
            if (f.find_curve(c.name) != nullptr)
                detail::parse_fail(line_no, "duplicate curve '" + c.name + "'");
            c.poly = detail::need_poly(f.surface, tok[2], line_no);
            c.start = detail::need_vec(tok[3], line_no);
            std::size_t i = 4;
            if (i < tok.size() && tok[i] == "taut") {
                c.taut = true;
                ++i;
            }
            while (i < tok.size()) {
                if (tok[i] != "seg")
                    detail::parse_fail(line_no, "expected 'seg', got '" + tok[i] + "'");
                if (++i >= tok.size()) detail::parse_fail(line_no, "seg needs a vector");
                c.segments.push_back(detail::need_vec(tok[i], line_no));
                c.seg_crossings.push_back({});
                ++i;
                while (i < tok.size() && tok[i] == "cross") {
                    if (++i >= tok.size())
                        detail::parse_fail(line_no, "cross needs <cylinder>:<count>");
                    auto colon = tok[i].rfind(':');
                    if (colon == std::string::npos || colon == 0 || colon + 1 == tok[i].size())
                        detail::parse_fail(line_no, "cross needs <cylinder>:<count>");
                    std::string cyl = tok[i].substr(0, colon);
                    if (f.surface.find_cylinder(cyl) == nullptr)
                        detail::parse_fail(line_no, "unknown cylinder '" + cyl + "'");
                    Rat count = detail::need_rat(tok[i].substr(colon + 1), line_no);
                    if (boost::multiprecision::denominator(count) != 1)
                        detail::parse_fail(line_no, "crossing counts are integers");
                    c.seg_crossings.back()[cyl] =
                        static_cast<int>(boost::multiprecision::numerator(count));
                    ++i;
                }
            }
            if (c.segments.empty())
                detail::parse_fail(line_no, "curve '" + c.name + "' has no segments");
            f.curves.push_back(std::move(c));
        } else if (kind == "annulus") {
            if (tok.size() != 6)
                detail::parse_fail(line_no,
                                   "usage: annulus <id> <curve> <poly> <x_lo> <x_hi>");
            Annulus a;
            a.id = tok[1];
            a.curve = tok[2];
            if (f.find_curve(a.curve) == nullptr)
                detail::parse_fail(line_no, "unknown curve '" + a.curve + "'");
            a.poly = detail::need_poly(f.surface, tok[3], line_no);
            a.x_lo = detail::need_rat(tok[4], line_no);
            a.x_hi = detail::need_rat(tok[5], line_no);
            for (const Annulus& other : f.annuli)
                if (other.id == a.id)
                    detail::parse_fail(line_no, "duplicate annulus '" + a.id + "'");
            f.annuli.push_back(std::move(a));
        } else {
            detail::parse_fail(line_no, "unknown directive '" + kind + "'");
        }
    }
    if (f.surface.polygons.empty())
        throw TeichError(Err::ParseError, "fixture declares no polygons");
    return f;
}

inline Fixture load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TeichError(Err::ParseError, "cannot open fixture file " + path);
    return parse_fixture(in);
}

// Structural validation plus certification of every declared curve and
// annulus annotation against the exact tracer.
inline ValidationReport validate_fixture(const Fixture& f) {
    ValidationReport report = validate(f.surface);
    if (!report.ok()) return report;

    for (const CurveClass& c : f.curves) {
        try {
            auto tr = trace_curve(f.surface, c);
            if (!tr.closed) {
                report.add(Err::ChartMismatch, c.name, "curve does not close up");
                continue;
            }
            check_declared_crossings(f.surface, c, tr);
            if (c.taut && !tr.smooth)
                report.add(Err::ChartMismatch, c.name,
                           "curve is declared taut but does not close smoothly");
        } catch (const TeichError& e) {
            report.add(e.code(), c.name, e.what());
        }
    }

    for (const Annulus& a : f.annuli) {
        const CurveClass* c = f.find_curve(a.curve);
        if (c == nullptr) {
            report.add(Err::FixtureIncomplete, a.id, "annulus references an unknown curve");
            continue;
        }
        try {
            strip_geometry(f.surface, a);
            auto tr = trace_curve(f.surface, *c);
            if (!annulus_encloses(f.surface, a, *c, tr))
                report.add(Err::ValidationFailure, a.id,
                           "annulus does not enclose its curve");
        } catch (const TeichError& e) {
            report.add(e.code(), a.id, e.what());
        }
    }
    return report;
}

}  // namespace teich
