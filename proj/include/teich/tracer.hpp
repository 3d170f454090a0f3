#pragma once

// Exact development of a segment chain across polygon gluings, entirely
// in rational arithmetic. The tracer certifies closure, counts signed
// core-circle crossings per segment, and certifies smooth closure
// (straight junctions, trivial frame) for taut chains.

#include "teich/curves.hpp"
#include "teich/errors.hpp"
#include "teich/surface.hpp"
#include "teich/vec.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace teich {

struct TraceResult {
    bool closed = false;
    bool frame_positive = true;  // holonomy of the chain acts by +1 on directions
    bool smooth = false;         // closed, frame +1, and straight at every junction
    RVec net{0, 0};              // developed period in the start chart (frame-weighted)
    std::vector<RVec> developed;
    std::map<std::string, int> crossings;
    std::vector<std::map<std::string, int>> seg_crossings;
    std::set<int> visited;  // polygons the chain passes through
};

namespace detail {

// 0 = interior, 1 = on edge boundary (edge/param set), 2 = outside / on a vertex.
struct PointLocation {
    int kind = 2;
    int edge = -1;
    Rat param{0};
};

inline PointLocation locate_point(const Polygon& poly, const RVec& p) {
    auto vs = poly.vertices();
    int n = static_cast<int>(poly.size());
    // Boundary first: exact collinearity + parameter range.
    for (int e = 0; e < n; ++e) {
        RVec a = vs[e];
        RVec d = poly.edges[e];
        RVec w = p - a;
        if (cross(d, w) != 0) continue;
        Rat t = (d.x != 0) ? w.x / d.x : w.y / d.y;
        if (t == 0 || t == 1) {
            PointLocation loc;
            loc.kind = 2;  // vertex: not a usable chart point
            return loc;
        }
        if (t > 0 && t < 1) {
            PointLocation loc;
            loc.kind = 1;
            loc.edge = e;
            loc.param = t;
            return loc;
        }
    }
    // Interior: even-odd rule with exact crossing tests against a +x ray.
    bool inside = false;
    for (int e = 0; e < n; ++e) {
        RVec a = vs[e];
        RVec b = vs[(e + 1) % n];
        if ((a.y > p.y) == (b.y > p.y)) continue;
        Rat x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (x_int > p.x) inside = !inside;
    }
    PointLocation loc;
    loc.kind = inside ? 0 : 2;
    return loc;
}

struct TraceState {
    int poly;
    RVec pos;
    int frame;                       // +1 or -1
    std::optional<int> on_edge;      // set when pos lies on that edge's interior
};

// Move a boundary point to the partner edge. Returns the frame multiplier.
inline int transport_point(const FlatSurface& s,
                           const std::map<EdgeRef, std::pair<EdgeRef, bool>>& pm,
                           TraceState& st) {
    EdgeRef here{st.poly, *st.on_edge};
    auto it = pm.find(here);
    if (it == pm.end())
        throw TeichError(Err::ChartMismatch,
                         "curve reaches unpaired edge " + edge_name(s, here));
    EdgeRef there = it->second.first;
    bool flip = it->second.second;
    const Polygon& src = s.polygons[st.poly];
    const Polygon& dst = s.polygons[there.poly];
    RVec a = src.vertices()[here.edge];
    RVec d = src.edges[here.edge];
    RVec w = st.pos - a;
    Rat t = (d.x != 0) ? w.x / d.x : w.y / d.y;
    Rat u = 1 - t;  // point at parameter t on edge a matches parameter 1-t on its partner
    st.poly = there.poly;
    st.pos = dst.vertices()[there.edge] + u * dst.edges[there.edge];
    st.on_edge = there.edge;
    if (flip) st.frame = -st.frame;
    return flip ? -1 : 1;
}

inline void count_core_crossings(const FlatSurface& s, int poly, const RVec& from,
                                 const RVec& to, std::map<std::string, int>& out) {
    for (const Cylinder& cyl : s.cylinders) {
        if (cyl.poly != poly) continue;
        if (from.y == to.y) continue;  // parallel to the core circle: no crossing
        Rat mid = cylinder_origin(s, cyl).y + cyl.height / 2;
        Rat s0 = from.y - mid;
        Rat s1 = to.y - mid;
        if (s0 == 0 || s1 == 0)
            throw TeichError(Err::ChartMismatch,
                             "curve has a junction on the core circle of " + cyl.id);
        if ((s0 < 0) != (s1 < 0)) out[cyl.id] += (s1 > 0) ? 1 : -1;
    }
}

}  // namespace detail

inline TraceResult trace_curve(const FlatSurface& s, const CurveClass& c) {
    check_chart(c, s);
    auto pm = s.pairing_map();

    detail::TraceState st;
    st.poly = c.poly;
    st.pos = c.start;
    st.frame = 1;

    auto start_loc = detail::locate_point(s.polygons[st.poly], st.pos);
    if (start_loc.kind == 2)
        throw TeichError(Err::ChartMismatch, "curve " + c.name +
                                                 " starts outside its polygon or on a vertex");
    if (start_loc.kind == 1) st.on_edge = start_loc.edge;

    // Record both chart representations of the start for the closure test.
    struct Rep {
        int poly;
        RVec pos;
        int hop_mult;  // frame factor of the gluing that produced this representation
    };
    std::vector<Rep> start_reps{{st.poly, st.pos, 1}};
    if (st.on_edge) {
        detail::TraceState ghost = st;
        int m = detail::transport_point(s, pm, ghost);
        start_reps.push_back({ghost.poly, ghost.pos, m});
    }

    TraceResult res;
    res.seg_crossings.resize(c.segments.size());
    res.developed.reserve(c.segments.size());

    for (std::size_t k = 0; k < c.segments.size(); ++k) {
        if (c.segments[k] == RVec{Rat(0), Rat(0)})
            throw TeichError(Err::ChartMismatch,
                             "curve " + c.name + " has a zero-length segment");
        res.developed.push_back(Rat(st.frame) * c.segments[k]);
        RVec r = c.segments[k];  // remaining displacement in the current local chart

        // A boundary start must point strictly inward; transport until it does.
        if (st.on_edge) {
            for (int guard = 0;; ++guard) {
                if (guard > 2)
                    throw TeichError(Err::ChartMismatch,
                                     "curve " + c.name + " cannot leave the edge it starts on");
                const Polygon& poly = s.polygons[st.poly];
                RVec e = poly.edges[*st.on_edge];
                Rat side = cross(e, r);
                if (side == 0)
                    throw TeichError(Err::ChartMismatch,
                                     "curve " + c.name + " runs along an edge");
                if (side > 0) break;  // interior lies to the left of a ccw edge
                int mult = detail::transport_point(s, pm, st);
                if (mult < 0) r = -r;
            }
        }

        while (true) {
            res.visited.insert(st.poly);
            const Polygon& poly = s.polygons[st.poly];
            auto vs = poly.vertices();
            int n = static_cast<int>(poly.size());

            std::optional<Rat> best_t;
            int best_edge = -1;
            Rat best_u{0};
            for (int e = 0; e < n; ++e) {
                RVec a = vs[e];
                RVec d = poly.edges[e];
                Rat den = cross(r, d);
                RVec w = a - st.pos;
                if (den == 0) {
                    if (cross(d, w) == 0)
                        throw TeichError(Err::ChartMismatch,
                                         "curve " + c.name + " runs along an edge");
                    continue;
                }
                Rat t = cross(w, d) / den;
                Rat u = cross(w, r) / den;
                if (t <= 0 || t > 1) continue;
                if (u < 0 || u > 1) continue;
                if (!best_t || t < *best_t) {
                    best_t = t;
                    best_edge = e;
                    best_u = u;
                }
            }
            // Only the first boundary contact matters; later grazes happen in
            // other charts.
            if (best_t && (best_u == 0 || best_u == 1))
                throw TeichError(Err::ChartMismatch,
                                 "curve " + c.name + " passes through a vertex");

            if (!best_t) {  // the rest of the segment stays in this polygon
                RVec target = st.pos + r;
                detail::count_core_crossings(s, st.poly, st.pos, target,
                                             res.seg_crossings[k]);
                auto loc = detail::locate_point(poly, target);
                if (loc.kind == 2)
                    throw TeichError(Err::ChartMismatch,
                                     "curve " + c.name + " leaves the surface charts");
                st.pos = target;
                st.on_edge = (loc.kind == 1) ? std::optional<int>(loc.edge) : std::nullopt;
                break;
            }

            RVec hit = st.pos + *best_t * r;
            detail::count_core_crossings(s, st.poly, st.pos, hit, res.seg_crossings[k]);
            Rat rest = 1 - *best_t;
            st.pos = hit;
            st.on_edge = best_edge;
            if (rest == 0) break;  // segment ends exactly on the edge
            r = rest * r;
            int mult = detail::transport_point(s, pm, st);
            if (mult < 0) r = -r;
        }
    }

    for (const auto& per_seg : res.seg_crossings)
        for (const auto& [cyl, cnt] : per_seg) res.crossings[cyl] += cnt;

    // Closure: compare every chart representation of the end point with
    // every representation of the start, tracking the frame across a hop.
    struct EndRep {
        int poly;
        RVec pos;
        int frame;
    };
    std::vector<EndRep> end_reps{{st.poly, st.pos, st.frame}};
    if (st.on_edge) {
        detail::TraceState ghost = st;
        detail::transport_point(s, pm, ghost);
        end_reps.push_back({ghost.poly, ghost.pos, ghost.frame});
    }
    int closing_frame = 0;
    for (const auto& er : end_reps) {
        for (const auto& sr : start_reps) {
            if (er.poly == sr.poly && er.pos == sr.pos) {
                // Closing against the hopped start representation crosses that
                // gluing once more on the way back to the original chart.
                closing_frame = er.frame * sr.hop_mult;
                res.closed = true;
                break;
            }
        }
        if (res.closed) break;
    }
    res.frame_positive = res.closed ? (closing_frame == 1) : (st.frame == 1);

    if (res.closed) {
        for (const RVec& d : res.developed) res.net = res.net + d;
        res.smooth = res.frame_positive;
        std::size_t m = res.developed.size();
        for (std::size_t k = 0; k < m && res.smooth; ++k) {
            const RVec& a = res.developed[k];
            const RVec& b = res.developed[(k + 1) % m];
            if (cross(a, b) != 0 || dot(a, b) <= 0) res.smooth = false;
        }
    }
    return res;
}

// Traced crossings must agree with the declared ones for the class data
// to be trusted by the certified bounds.
inline void check_declared_crossings(const FlatSurface& s, const CurveClass& c,
                                     const TraceResult& tr) {
    for (std::size_t k = 0; k < c.segments.size(); ++k) {
        std::map<std::string, int> declared =
            (k < c.seg_crossings.size()) ? c.seg_crossings[k] : std::map<std::string, int>{};
        std::map<std::string, int> traced = tr.seg_crossings[k];
        for (auto it = declared.begin(); it != declared.end();) {
            if (it->second == 0)
                it = declared.erase(it);
            else
                ++it;
        }
        for (auto it = traced.begin(); it != traced.end();) {
            if (it->second == 0)
                it = traced.erase(it);
            else
                ++it;
        }
        if (declared != traced)
            throw TeichError(Err::ChartMismatch,
                             "curve " + c.name + " declares crossings that do not match its trace");
    }
    (void)s;
}

}  // namespace teich
