#pragma once

// Certified extremal-length intervals for curve classes on (deformed)
// flat surfaces, plus the Kerckhoff distance lower bound and the
// quasiconformal stretch upper bound built from them.
//
// Lower bounds come from homotopy invariants of the traced chain:
//   - the developed period (valid when the chain's frame is trivial),
//   - signed core-circle crossings times the cylinder crossing width,
//   - the chain's own length when it closes up smoothly on a surface
//     with no cone angle below 2 pi (a closed local geodesic there is
//     shortest in its class).
// Upper bounds come from explicit embedded annuli around the class:
//   - an annotated cylinder whose core the chain is,
//   - a declared vertical strip annulus containing the chain,
//   - on genus one, the whole torus as an annulus around any geodesic.

#include "teich/curves.hpp"
#include "teich/deform.hpp"
#include "teich/errors.hpp"
#include "teich/surface.hpp"
#include "teich/tracer.hpp"
#include "teich/vec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace teich {

// A vertical strip [x_lo, x_hi] x [0, H] of one polygon whose top and
// bottom glue to each other by x |-> x, forming an embedded flat annulus
// around a vertical core curve.
struct Annulus {
    std::string id;
    std::string curve;  // name of the curve class it encloses
    int poly = -1;
    Rat x_lo = 0;
    Rat x_hi = 0;
};

namespace detail {

struct StripGeometry {
    Rat width;
    Rat height;
};

}  // namespace detail

// Validate the strip against the base surface and return its size.
inline detail::StripGeometry strip_geometry(const FlatSurface& s, const Annulus& a) {
    if (a.poly < 0 || a.poly >= static_cast<int>(s.polygons.size()))
        throw TeichError(Err::ValidationFailure, "annulus " + a.id + " references no polygon");
    if (!(a.x_lo < a.x_hi))
        throw TeichError(Err::ValidationFailure, "annulus " + a.id + " has an empty strip");
    const Polygon& p = s.polygons[a.poly];
    RVec lo = polygon_min_corner(p);
    if (!(lo == RVec{Rat(0), Rat(0)}))
        throw TeichError(Err::ValidationFailure,
                         "annulus " + a.id + " polygon does not start at its corner");
    auto verts = p.vertices();
    Rat height = 0;
    for (const RVec& v : verts)
        if (v.y > height) height = v.y;

    auto pm = s.pairing_map();
    for (int i = 0; i < p.size(); ++i) {
        const RVec& e = p.edges[i];
        RVec at = verts[i];
        if (e.x == 0) {
            // A vertical edge strictly inside the strip would cut it open.
            if (a.x_lo < at.x && at.x < a.x_hi)
                throw TeichError(Err::ValidationFailure,
                                 "annulus " + a.id + " strip crosses a vertical edge");
            continue;
        }
        if (e.y != 0)
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " polygon has a slanted edge");
        Rat e_lo = at.x < at.x + e.x ? at.x : at.x + e.x;
        Rat e_hi = at.x < at.x + e.x ? at.x + e.x : at.x;
        Rat o_lo = e_lo > a.x_lo ? e_lo : a.x_lo;
        Rat o_hi = e_hi < a.x_hi ? e_hi : a.x_hi;
        if (o_lo >= o_hi) continue;  // no overlap with the strip
        if (at.y != 0 && at.y != height)
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " strip hits a horizontal edge mid-height");
        if (at.y == 0) continue;  // bottom pieces are checked through their top partners
        auto it = pm.find({a.poly, i});
        if (it == pm.end())
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " strip touches an unpaired edge");
        EdgeRef partner = it->second.first;
        bool flip = it->second.second;
        if (partner.poly != a.poly || flip)
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " top does not return to its own bottom");
        const RVec& pe = p.edges[partner.edge];
        RVec pat = verts[partner.edge];
        if (pe.y != 0 || pat.y != 0)
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " top is not glued to the bottom");
        // Top runs right-to-left, bottom left-to-right; parameters match via
        // s <-> 1-s, so x |-> x exactly when the two x-intervals coincide.
        Rat p_lo = pat.x < pat.x + pe.x ? pat.x : pat.x + pe.x;
        if (p_lo != e_lo || pe.x != -e.x)
            throw TeichError(Err::ValidationFailure,
                             "annulus " + a.id + " top-bottom gluing is not the identity in x");
    }
    return {a.x_hi - a.x_lo, height};
}

inline Rat annulus_modulus(const FlatSurface& s, const Annulus& a) {
    auto g = strip_geometry(s, a);
    return g.width / g.height;
}

// Whether the traced chain is a core of the strip annulus: a vertical
// chain inside the strip, wrapping its height exactly once, never
// leaving the strip's polygon.
inline bool annulus_encloses(const FlatSurface& s, const Annulus& a, const CurveClass& c,
                             const TraceResult& tr) {
    auto g = strip_geometry(s, a);
    for (const RVec& seg : c.segments)
        if (seg.x != 0) return false;
    Rat net_y = tr.net.y < 0 ? Rat(-tr.net.y) : tr.net.y;
    return tr.closed && c.poly == a.poly && tr.visited.size() == 1 &&
           tr.visited.count(a.poly) == 1 && tr.net.x == 0 && net_y == g.height &&
           a.x_lo < c.start.x && c.start.x < a.x_hi;
}

inline double annulus_modulus(const DeformedSurface& d, const Annulus& a) {
    auto g = strip_geometry(*d.base, a);
    DVec core = d.map.apply(DVec{0.0, to_double(g.height)});
    return to_double(g.width * g.height) * std::abs(d.map.det()) / norm_sq(core);
}

inline Rat cylinder_modulus(const FlatSurface& s, const std::string& id) {
    const Cylinder* c = s.find_cylinder(id);
    if (c == nullptr) throw TeichError(Err::UnknownCylinder, "no cylinder named " + id);
    return c->modulus();
}

inline double cylinder_modulus(const DeformedSurface& d, const std::string& id) {
    const Cylinder* c = d.base->find_cylinder(id);
    if (c == nullptr) throw TeichError(Err::UnknownCylinder, "no cylinder named " + id);
    DVec core = d.map.apply(to_dvec(c->core_holonomy()));
    return to_double(c->flat_area()) * std::abs(d.map.det()) / norm_sq(core);
}

struct ExtWitness {
    std::string kind;
    double ext;
};

struct ExtInterval {
    std::string curve;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool hi_finite = false;
    std::string lo_witness;
    std::string hi_witness;
    std::vector<ExtWitness> upper_witnesses;
};

// Certified length lower bound (squared) for the class of the traced
// chain on the deformed surface; exact overload for the undeformed base.
inline Rat geodesic_length_lower_bound_sq(const FlatSurface& s, const TraceResult& tr,
                                          const ValidationReport& report) {
    if (!tr.closed)
        throw TeichError(Err::ChartMismatch, "length bounds need a closed chain");
    Rat period_sq = 0;
    if (tr.frame_positive) period_sq = dot(tr.net, tr.net);
    Rat crossing_len = 0;
    for (const auto& [cyl_id, cnt] : tr.crossings) {
        if (cnt == 0) continue;
        const Cylinder* c = s.find_cylinder(cyl_id);
        if (c == nullptr) continue;
        crossing_len += Rat(cnt < 0 ? -cnt : cnt) * c->height;
    }
    Rat crossing_sq = crossing_len * crossing_len;
    Rat best = period_sq > crossing_sq ? period_sq : crossing_sq;
    if (tr.smooth) {
        bool npc = true;
        for (int k : report.cone_angle_multiples)
            if (k < 2) npc = false;
        if (npc) {
            // Smooth chains have all developed segments parallel, so the
            // chain's own length equals |net|; it is a closed local geodesic
            // and hence shortest in its class on a nonpositively curved
            // surface.
            Rat taut_sq = dot(tr.net, tr.net);
            if (taut_sq > best) best = taut_sq;
        }
    }
    return best;
}

inline double geodesic_length_lower_bound(const FlatSurface& s, const CurveClass& c) {
    auto tr = trace_curve(s, c);
    auto report = validate(s);
    if (!report.ok())
        throw TeichError(Err::ValidationFailure, "length bounds need a valid surface");
    return std::sqrt(to_double(geodesic_length_lower_bound_sq(s, tr, report)));
}

inline double geodesic_length_lower_bound(const DeformedSurface& d, const CurveClass& c) {
    auto tr = trace_curve(*d.base, c);
    if (!tr.closed)
        throw TeichError(Err::ChartMismatch, "length bounds need a closed chain");
    auto report = validate(*d.base);
    if (!report.ok())
        throw TeichError(Err::ValidationFailure, "length bounds need a valid surface");
    const Mat2& L = d.map;
    double det = std::abs(L.det());
    double period = tr.frame_positive ? norm(L.apply(to_dvec(tr.net))) : 0.0;
    double crossing = 0.0;
    for (const auto& [cyl_id, cnt] : tr.crossings) {
        if (cnt == 0) continue;
        const Cylinder* c_ptr = d.base->find_cylinder(cyl_id);
        if (c_ptr == nullptr) continue;
        double width = to_double(c_ptr->flat_area()) * det /
                       norm(L.apply(to_dvec(c_ptr->core_holonomy())));
        crossing += std::abs(cnt) * width;
    }
    double best = std::max(period, crossing);
    if (tr.smooth) {
        bool npc = true;
        for (int k : report.cone_angle_multiples)
            if (k < 2) npc = false;
        if (npc) best = std::max(best, norm(L.apply(to_dvec(tr.net))));
    }
    return best;
}

// Extremal-length interval for the class of `c` on the deformed surface.
// The identity map takes a fully rational path, so equal lower and upper
// expressions produce bitwise-equal doubles.
inline ExtInterval ext_interval(const CurveClass& c, const DeformedSurface& d,
                                const std::vector<Annulus>& annuli = {},
                                bool require_upper = false) {
    const FlatSurface& base = *d.base;
    auto tr = trace_curve(base, c);
    if (!tr.closed)
        throw TeichError(Err::ChartMismatch, "curve " + c.name + " does not close up");
    check_declared_crossings(base, c, tr);
    auto report = validate(base);
    if (!report.ok())
        throw TeichError(Err::ValidationFailure,
                         "extremal length bounds need a valid surface");

    ExtInterval out;
    out.curve = c.name;

    const Mat2& L = d.map;
    bool identity = L.is_identity();
    double det = std::abs(L.det());
    Rat base_area = base.area();

    // ---- lower bound ----
    if (identity) {
        Rat len_sq = geodesic_length_lower_bound_sq(base, tr, report);
        out.lo = to_double(len_sq / base_area);
    } else {
        double len = geodesic_length_lower_bound(d, c);
        out.lo = len * len / (to_double(base_area) * det);
    }
    {
        // Name the strongest contributor for reporting.
        Rat period_sq = tr.frame_positive ? dot(tr.net, tr.net) : Rat(0);
        Rat crossing_len = 0;
        for (const auto& [cyl_id, cnt] : tr.crossings) {
            const Cylinder* cp = base.find_cylinder(cyl_id);
            if (cp != nullptr && cnt != 0) crossing_len += Rat(cnt < 0 ? -cnt : cnt) * cp->height;
        }
        if (crossing_len * crossing_len > period_sq)
            out.lo_witness = "crossing";
        else
            out.lo_witness = tr.smooth ? "taut-length" : "period";
    }

    // ---- upper bounds ----
    auto consider = [&](const std::string& kind, double ext) {
        out.upper_witnesses.push_back({kind, ext});
        if (!out.hi_finite || ext < out.hi) {
            out.hi = ext;
            out.hi_finite = true;
            out.hi_witness = kind;
        }
    };

    // Annotated cylinder whose core this chain is: one wrap, smooth, and
    // the chain never leaves the cylinder's polygon.
    for (const Cylinder& cyl : base.cylinders) {
        RVec core = cyl.core_holonomy();
        bool is_core = tr.smooth && tr.visited.size() == 1 &&
                       tr.visited.count(cyl.poly) == 1 &&
                       (tr.net == core || tr.net == -core);
        if (!is_core) continue;
        double ext;
        if (identity) {
            ext = to_double(Rat(1) / cyl.modulus());
        } else {
            DVec w = L.apply(to_dvec(core));
            ext = norm_sq(w) / (to_double(cyl.flat_area()) * det);
        }
        consider("cylinder:" + cyl.id, ext);
    }

    // Declared strip annulus around this chain: vertical chain inside the
    // strip wrapping the strip's core once. Non-matching annuli are
    // silently skipped (a twisted representative keeps the class name but
    // leaves its strip).
    for (const Annulus& a : annuli) {
        if (a.curve != c.name) continue;
        if (!annulus_encloses(base, a, c, tr)) continue;
        auto g = strip_geometry(base, a);
        double ext;
        if (identity) {
            ext = to_double(g.height / g.width);
        } else {
            DVec w = L.apply(DVec{0.0, to_double(g.height)});
            ext = norm_sq(w) / (to_double(g.width * g.height) * det);
        }
        consider("annulus:" + a.id, ext);
    }

    // On genus one the whole torus is an annulus around any smooth loop.
    if (report.genus == 1 && tr.smooth) {
        double ext;
        if (identity) {
            ext = to_double(dot(tr.net, tr.net) / base_area);
        } else {
            DVec w = L.apply(to_dvec(tr.net));
            ext = norm_sq(w) / (to_double(base_area) * det);
        }
        consider("torus-closed-form", ext);
    }

    if (require_upper && !out.hi_finite)
        throw TeichError(Err::NoUpperWitness,
                         "no certified upper bound applies to curve " + c.name);
    return out;
}

// d(x, y) >= (1/2) log max_gamma Ext_x(gamma)/Ext_y(gamma), applied with
// certified intervals in both directions and floored at zero.
inline double kerckhoff_lower_bound(const std::vector<ExtInterval>& at_x,
                                    const std::vector<ExtInterval>& at_y) {
    if (at_x.empty() || at_y.empty() || at_x.size() != at_y.size())
        throw TeichError(Err::EmptyFamily,
                         "the distance bound needs matching nonempty curve families");
    double best = 1.0;
    for (std::size_t i = 0; i < at_x.size(); ++i) {
        if (at_y[i].hi_finite && at_y[i].hi > 0.0) best = std::max(best, at_x[i].lo / at_y[i].hi);
        if (at_x[i].hi_finite && at_x[i].hi > 0.0) best = std::max(best, at_y[i].lo / at_x[i].hi);
    }
    return 0.5 * std::log(best);
}

inline double stretch_upper_bound(double K) {
    if (!(K >= 1.0))
        throw TeichError(Err::BadK, "stretch upper bound expects K >= 1");
    return 0.5 * std::log(K);
}

struct ConvexityCheck {
    bool ok = false;
    double K_min = 1.0;         // argmin of the sampled profile
    double value_at_one = 0.0;  // squared deformed core length at K = 1
    std::vector<double> samples;
};

// Squared length of a cylinder core along the stretch leg in direction
// theta: K |w_x|^2 + |w_y|^2 / K in the rotated frame, so it must be
// convex in K with its minimum where the two terms balance.
inline ConvexityCheck modulus_convexity_check(const FlatSurface& s, const CurveClass& core,
                                              double theta, double K_hi, int samples = 32,
                                              double tol = 1e-9) {
    if (core.segments.size() != 1 || core.segments[0].y != 0)
        throw TeichError(Err::NotCore,
                         "convexity check expects a single horizontal core segment");
    auto tr = trace_curve(s, core);
    if (!tr.closed || !tr.smooth)
        throw TeichError(Err::NotCore, "convexity check expects a smooth closed core");
    if (!(K_hi > 1.0) || samples < 3)
        throw TeichError(Err::BadK, "convexity check needs K_hi > 1 and at least 3 samples");

    DVec w = Mat2::rotation(theta / 2.0).apply(to_dvec(tr.net));
    double a = w.x * w.x;
    double b = w.y * w.y;

    ConvexityCheck out;
    out.value_at_one = a + b;
    out.K_min = (a > 0.0) ? std::sqrt(b / a) : K_hi;
    out.samples.reserve(samples);
    double lo_log = 0.0, hi_log = std::log(K_hi);
    for (int i = 0; i < samples; ++i) {
        double K = std::exp(lo_log + (hi_log - lo_log) * i / (samples - 1));
        out.samples.push_back(a * K + b / K);
    }
    out.ok = true;
    for (int i = 1; i + 1 < samples && out.ok; ++i) {
        double second = out.samples[i - 1] - 2.0 * out.samples[i] + out.samples[i + 1];
        if (second < -tol) out.ok = false;
    }
    double edge_max = std::max(out.samples.front(), out.samples.back());
    for (int i = 1; i + 1 < samples && out.ok; ++i)
        if (out.samples[i] > edge_max + tol) out.ok = false;
    return out;
}

}  // namespace teich
