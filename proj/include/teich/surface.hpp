#pragma once

// Flat half-translation surfaces as polygons with paired edges, plus
// horizontal-cylinder annotations and the structural validator
// (closure, pairing involution, cone angles, Gauss-Bonnet genus,
// cylinder tiling).

#include "teich/errors.hpp"
#include "teich/rational.hpp"
#include "teich/vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace teich {

struct EdgeRef {
    int poly = -1;
    int edge = -1;

    friend bool operator==(const EdgeRef& a, const EdgeRef& b) {
        return a.poly == b.poly && a.edge == b.edge;
    }
    friend bool operator<(const EdgeRef& a, const EdgeRef& b) {
        return a.poly != b.poly ? a.poly < b.poly : a.edge < b.edge;
    }
};

// flip == false: glued by translation, partner holonomy is -v.
// flip == true: glued by point reflection, partner holonomy is +v.
// Either way edge parameters correspond via s <-> 1-s.
struct Pairing {
    EdgeRef a;
    EdgeRef b;
    bool flip = false;
};

struct Polygon {
    std::string id;
    std::vector<RVec> edges;

    int size() const { return static_cast<int>(edges.size()); }

    // Vertex i is the start of edge i; vertex 0 sits at the origin of the chart.
    std::vector<RVec> vertices() const {
        std::vector<RVec> out;
        out.reserve(edges.size());
        RVec p{0, 0};
        for (const RVec& e : edges) {
            out.push_back(p);
            p = p + e;
        }
        return out;
    }

    Rat signed_area() const {
        std::vector<RVec> v = vertices();
        Rat twice = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const RVec& p = v[i];
            const RVec& q = v[(i + 1) % v.size()];
            twice += cross(p, q);
        }
        return twice / 2;
    }
};

struct Cylinder {
    std::string id;
    int poly = -1;
    Rat circumference = 0;
    Rat height = 0;

    RVec core_holonomy() const { return {circumference, Rat(0)}; }
    Rat modulus() const { return height / circumference; }
    Rat flat_area() const { return circumference * height; }
};

struct FlatSurface {
    std::string name;
    std::vector<Polygon> polygons;
    std::vector<Pairing> pairings;
    std::vector<Cylinder> cylinders;

    Rat area() const {
        Rat total = 0;
        for (const Polygon& p : polygons) total += p.signed_area();
        return total;
    }

    int find_polygon(const std::string& id) const {
        for (std::size_t i = 0; i < polygons.size(); ++i)
            if (polygons[i].id == id) return static_cast<int>(i);
        return -1;
    }

    const Cylinder* find_cylinder(const std::string& id) const {
        for (const Cylinder& c : cylinders)
            if (c.id == id) return &c;
        return nullptr;
    }

    // Edge -> (partner edge, flip).
    std::map<EdgeRef, std::pair<EdgeRef, bool>> pairing_map() const {
        std::map<EdgeRef, std::pair<EdgeRef, bool>> m;
        for (const Pairing& p : pairings) {
            m[p.a] = {p.b, p.flip};
            m[p.b] = {p.a, p.flip};
        }
        return m;
    }
};

inline std::string edge_name(const FlatSurface& s, const EdgeRef& e) {
    std::string poly = (e.poly >= 0 && e.poly < static_cast<int>(s.polygons.size()))
                           ? s.polygons[e.poly].id
                           : "?";
    return poly + "." + std::to_string(e.edge);
}

inline RVec polygon_min_corner(const Polygon& p) {
    std::vector<RVec> verts = p.vertices();
    RVec lo = verts.front();
    for (const RVec& v : verts) {
        if (v.x < lo.x) lo.x = v.x;
        if (v.y < lo.y) lo.y = v.y;
    }
    return lo;
}

inline RVec cylinder_origin(const FlatSurface& s, const Cylinder& c) {
    return polygon_min_corner(s.polygons[c.poly]);
}

inline std::vector<EdgeRef> horizontal_edges(const FlatSurface& s, int poly) {
    std::vector<EdgeRef> out;
    const Polygon& p = s.polygons[poly];
    for (int i = 0; i < p.size(); ++i)
        if (p.edges[i].y == 0) out.push_back({poly, i});
    return out;
}

struct ValidationIssue {
    Err code;
    std::string element;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    Rat area = 0;
    int genus = 0;
    std::vector<int> cone_angle_multiples;  // cone angle at class j is multiples[j] * pi
    bool completely_periodic = false;

    bool ok() const { return issues.empty(); }

    void add(Err code, const std::string& element, const std::string& message) {
        issues.push_back({code, element, message});
    }
};

namespace detail {

struct RatComplex {
    Rat re;
    Rat im;
};

inline RatComplex mul(const RatComplex& a, const RatComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline void normalize(RatComplex& z) {
    Rat re_mag = z.re < 0 ? Rat(-z.re) : z.re;
    Rat im_mag = z.im < 0 ? Rat(-z.im) : z.im;
    Rat m = re_mag < im_mag ? im_mag : re_mag;
    if (m != 0) {
        z.re /= m;
        z.im /= m;
    }
}

// Corner between incoming edge u and outgoing edge w of a positively
// oriented polygon. The interior angle is pi minus the turn angle; the
// returned complex number is a positive multiple of e^{i * interior}.
inline RatComplex corner_rotation(const RVec& u, const RVec& w) {
    return {-dot(u, w), cross(u, w)};
}

inline double corner_angle(const RVec& u, const RVec& w) {
    double turn = std::atan2(to_double(cross(u, w)), to_double(dot(u, w)));
    return std::numbers::pi - turn;
}

}  // namespace detail

// Orbits of polygon corners under the edge identifications; corner (p, i)
// is the vertex at the start of edge i.
inline std::vector<std::vector<EdgeRef>> vertex_classes(const FlatSurface& s) {
    auto partner = s.pairing_map();
    std::set<EdgeRef> seen;
    std::vector<std::vector<EdgeRef>> classes;
    for (int p = 0; p < static_cast<int>(s.polygons.size()); ++p) {
        for (int i = 0; i < s.polygons[p].size(); ++i) {
            EdgeRef corner{p, i};
            if (seen.count(corner)) continue;
            std::vector<EdgeRef> orbit;
            EdgeRef cur = corner;
            while (!seen.count(cur)) {
                seen.insert(cur);
                orbit.push_back(cur);
                auto it = partner.find(cur);
                if (it == partner.end()) return classes;  // caller flags unpaired edges
                EdgeRef next = it->second.first;
                next.edge = (next.edge + 1) % s.polygons[next.poly].size();
                cur = next;
            }
            classes.push_back(std::move(orbit));
        }
    }
    return classes;
}

inline ValidationReport validate(const FlatSurface& s) {
    ValidationReport report;

    if (s.polygons.empty()) {
        report.add(Err::ValidationFailure, s.name, "surface has no polygons");
        return report;
    }

    for (const Polygon& p : s.polygons) {
        if (p.size() < 3)
            report.add(Err::NonClosingPolygon, p.id, "polygon has fewer than 3 edges");
        RVec sum{0, 0};
        for (int i = 0; i < p.size(); ++i) {
            if (p.edges[i].x == 0 && p.edges[i].y == 0)
                report.add(Err::NonClosingPolygon, p.id + "." + std::to_string(i),
                           "zero-length edge");
            sum = sum + p.edges[i];
        }
        if (!(sum == RVec{0, 0}))
            report.add(Err::NonClosingPolygon, p.id, "edge vectors do not sum to zero");
    }
    if (!report.ok()) return report;

    for (const Polygon& p : s.polygons) {
        Rat a = p.signed_area();
        if (a == 0)
            report.add(Err::ZeroArea, p.id, "polygon has zero area");
        else if (a < 0)
            report.add(Err::BadOrientation, p.id,
                       "polygon is negatively oriented (list edges counterclockwise)");
    }
    report.area = s.area();

    // Pairing involution: each edge in exactly one pairing, no fixed points,
    // holonomies matched by the declared sign.
    std::map<EdgeRef, int> uses;
    for (const Pairing& pr : s.pairings) {
        for (const EdgeRef& e : {pr.a, pr.b}) {
            if (e.poly < 0 || e.poly >= static_cast<int>(s.polygons.size()) || e.edge < 0 ||
                e.edge >= s.polygons[e.poly].size()) {
                report.add(Err::BadPairing, edge_name(s, e), "edge reference out of range");
                return report;
            }
            uses[e]++;
        }
        if (pr.a == pr.b)
            report.add(Err::BadPairing, edge_name(s, pr.a), "edge paired with itself");
    }
    for (int p = 0; p < static_cast<int>(s.polygons.size()); ++p)
        for (int i = 0; i < s.polygons[p].size(); ++i) {
            int n = uses.count({p, i}) ? uses[{p, i}] : 0;
            if (n != 1)
                report.add(Err::BadPairing, edge_name(s, {p, i}),
                           n == 0 ? "edge is not paired" : "edge appears in several pairings");
        }
    for (const Pairing& pr : s.pairings) {
        if (pr.a == pr.b) continue;
        const RVec& va = s.polygons[pr.a.poly].edges[pr.a.edge];
        const RVec& vb = s.polygons[pr.b.poly].edges[pr.b.edge];
        RVec expected = pr.flip ? va : -va;
        if (!(vb == expected))
            report.add(Err::BadPairing, edge_name(s, pr.a) + "~" + edge_name(s, pr.b),
                       "paired holonomies do not match the declared sign");
    }
    if (!report.ok()) return report;

    // Connectivity across the gluing graph.
    {
        std::vector<int> comp(s.polygons.size(), -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        auto partner = s.pairing_map();
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            for (int i = 0; i < s.polygons[p].size(); ++i) {
                int q = partner[{p, i}].first.poly;
                if (comp[q] == -1) {
                    comp[q] = 0;
                    stack.push_back(q);
                }
            }
        }
        for (std::size_t p = 0; p < comp.size(); ++p)
            if (comp[p] == -1)
                report.add(Err::BadPairing, s.polygons[p].id,
                           "surface is not connected");
        if (!report.ok()) return report;
    }

    // Cone angles: float locates the multiple of pi, the exact rational
    // product certifies it (imaginary part must vanish identically and the
    // real part's sign must match the parity).
    auto classes = vertex_classes(s);
    for (const auto& orbit : classes) {
        double angle = 0.0;
        detail::RatComplex z{1, 0};
        std::string element;
        for (const EdgeRef& corner : orbit) {
            const Polygon& p = s.polygons[corner.poly];
            const RVec& incoming = p.edges[(corner.edge + p.size() - 1) % p.size()];
            const RVec& outgoing = p.edges[corner.edge];
            angle += detail::corner_angle(incoming, outgoing);
            z = detail::mul(z, detail::corner_rotation(incoming, outgoing));
            detail::normalize(z);
            if (!element.empty()) element += ",";
            element += edge_name(s, corner);
        }
        int k = static_cast<int>(std::llround(angle / std::numbers::pi));
        bool ok = k >= 1 && std::abs(angle - k * std::numbers::pi) < 1e-9;
        if (ok && z.im != 0) ok = false;
        if (ok && (k % 2 == 0) != (z.re > 0)) ok = false;
        if (!ok) {
            report.add(Err::NonHalfTranslationAngle, "{" + element + "}",
                       "cone angle is not a positive multiple of pi");
        } else {
            report.cone_angle_multiples.push_back(k);
        }
    }
    if (!report.ok()) return report;

    // Gauss-Bonnet: sum of (angle - 2 pi) over cone points is 2 pi (2g - 2).
    {
        int sum_k = 0;
        for (int k : report.cone_angle_multiples) sum_k += k;
        int num = sum_k - 2 * static_cast<int>(report.cone_angle_multiples.size()) + 4;
        if (num % 4 != 0 || num < 4) {
            report.add(Err::NonHalfTranslationAngle, s.name,
                       "cone angles are inconsistent with an integer genus >= 1");
        } else {
            report.genus = num / 4;
        }
    }

    if (report.area == 0) report.add(Err::ZeroArea, s.name, "surface area is zero");
    if (!report.ok()) return report;

    // Cylinder annotations: an axis-aligned rectangle of size c x h whose
    // left and right sides are glued to each other by translation.
    std::set<std::string> cyl_ids;
    std::set<int> cyl_polys;
    Rat tiled = 0;
    auto partner = s.pairing_map();
    for (const Cylinder& c : s.cylinders) {
        if (!cyl_ids.insert(c.id).second)
            report.add(Err::BadCylinder, c.id, "duplicate cylinder id");
        if (c.poly < 0 || c.poly >= static_cast<int>(s.polygons.size())) {
            report.add(Err::BadCylinder, c.id, "cylinder polygon out of range");
            continue;
        }
        if (!cyl_polys.insert(c.poly).second)
            report.add(Err::BadCylinder, c.id, "two cylinders annotate the same polygon");
        if (c.circumference <= 0 || c.height <= 0) {
            report.add(Err::BadCylinder, c.id, "circumference and height must be positive");
            continue;
        }
        const Polygon& p = s.polygons[c.poly];
        RVec lo = polygon_min_corner(p);
        std::vector<RVec> verts = p.vertices();
        bool shape_ok = true;
        std::vector<std::pair<Rat, Rat>> bottom, top;
        std::vector<std::pair<EdgeRef, bool>> left, right;  // edge, unused
        for (int i = 0; i < p.size() && shape_ok; ++i) {
            const RVec& e = p.edges[i];
            RVec at = verts[i] - lo;
            if (e.y == 0) {
                if (at.y == 0) {
                    if (e.x <= 0) shape_ok = false;
                    bottom.push_back({at.x, at.x + e.x});
                } else if (at.y == c.height) {
                    if (e.x >= 0) shape_ok = false;
                    top.push_back({at.x + e.x, at.x});
                } else {
                    shape_ok = false;
                }
            } else if (e.x == 0) {
                if (at.x == c.circumference && e.y == c.height)
                    right.push_back({{c.poly, i}, true});
                else if (at.x == 0 && e.y == -c.height)
                    left.push_back({{c.poly, i}, false});
                else
                    shape_ok = false;
            } else {
                shape_ok = false;
            }
        }
        auto tiles = [](std::vector<std::pair<Rat, Rat>>& spans, const Rat& c_len) {
            std::sort(spans.begin(), spans.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            Rat at = 0;
            for (const auto& sp : spans) {
                if (sp.first != at) return false;
                at = sp.second;
            }
            return at == c_len;
        };
        if (shape_ok)
            shape_ok = tiles(bottom, c.circumference) && tiles(top, c.circumference) &&
                       left.size() == 1 && right.size() == 1;
        if (shape_ok) {
            auto pr = partner.find(left.front().first);
            shape_ok = pr != partner.end() && pr->second.first == right.front().first &&
                       !pr->second.second;
        }
        if (!shape_ok) {
            report.add(Err::BadCylinder, c.id,
                       "annotated polygon is not a c x h rectangle wrapped left-to-right");
            continue;
        }
        tiled += c.flat_area();
    }
    if (tiled > report.area)
        report.add(Err::BadCylinder, s.name, "cylinder areas exceed the surface area");
    report.completely_periodic = (tiled == report.area) && !s.cylinders.empty();

    return report;
}

}  // namespace teich
