#pragma once

// Homotopy classes of closed curves carried as chains of straight
// segments, their horizontal/vertical holonomy statistics, and the
// Dehn-twist action on chains.

#include "teich/errors.hpp"
#include "teich/surface.hpp"
#include "teich/vec.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace teich {

struct CurveClass {
    std::string name;
    int poly = 0;           // chart of the start point
    RVec start{0, 0};       // in that polygon's coordinates (vertex 0 at the origin)
    std::vector<RVec> segments;
    std::vector<std::map<std::string, int>> seg_crossings;  // signed, per segment
    bool taut = false;

    std::map<std::string, int> crossings() const {
        std::map<std::string, int> total;
        for (const auto& per_seg : seg_crossings)
            for (const auto& [cyl, count] : per_seg) total[cyl] += count;
        return total;
    }

    int crossing_count(const std::string& cyl) const {
        auto total = crossings();
        auto it = total.find(cyl);
        return it == total.end() ? 0 : it->second;
    }
};

struct HolonomyStats {
    double h = 0.0;    // sum of |x| over segments
    double v = 0.0;    // sum of |y|
    double len = 0.0;  // sum of segment euclidean lengths
};

struct TransformedStats {
    HolonomyStats stats;
    // Set when len had to be recomputed from (h, v) as if the chain were a
    // single segment; in that case len is only an upper bound for chains.
    bool len_is_single_segment_bound = false;
};

inline void check_chart(const CurveClass& c, const FlatSurface& s) {
    if (c.poly < 0 || c.poly >= static_cast<int>(s.polygons.size()))
        throw TeichError(Err::ChartMismatch,
                         "curve " + c.name + " references a polygon the surface does not have");
    if (c.segments.empty())
        throw TeichError(Err::ChartMismatch, "curve " + c.name + " has no segments");
    for (const auto& per_seg : c.seg_crossings)
        for (const auto& [cyl, count] : per_seg) {
            (void)count;
            if (s.find_cylinder(cyl) == nullptr)
                throw TeichError(Err::ChartMismatch, "curve " + c.name +
                                                         " declares crossings of unknown cylinder " +
                                                         cyl);
        }
}

inline HolonomyStats holonomy_stats(const CurveClass& c, const FlatSurface& s) {
    check_chart(c, s);
    HolonomyStats st;
    for (const RVec& seg : c.segments) {
        DVec d = to_dvec(seg);
        st.h += std::abs(d.x);
        st.v += std::abs(d.y);
        st.len += norm(d);
    }
    return st;
}

inline TransformedStats transform_stats(const HolonomyStats& st, double K) {
    if (!(K > 0)) throw TeichError(Err::NonPositiveK, "stretch factor must be positive");
    double s = std::sqrt(K);
    TransformedStats out;
    out.stats.h = s * st.h;
    out.stats.v = st.v / s;
    out.stats.len = std::hypot(out.stats.h, out.stats.v);
    out.len_is_single_segment_bound = true;
    return out;
}

inline TransformedStats transform_stats(const CurveClass& c, const FlatSurface& s, double K) {
    if (!(K > 0)) throw TeichError(Err::NonPositiveK, "stretch factor must be positive");
    check_chart(c, s);
    double sq = std::sqrt(K);
    TransformedStats out;
    for (const RVec& seg : c.segments) {
        DVec d = to_dvec(seg);
        double x = sq * std::abs(d.x);
        double y = std::abs(d.y) / sq;
        out.stats.h += x;
        out.stats.v += y;
        out.stats.len += std::hypot(x, y);
    }
    return out;
}

// Dehn twist about the cylinder's core applied to the chain: every
// crossing segment is sheared by n times the core holonomy per signed
// crossing. The chain stays closed; the taut flag is cleared since the
// sheared chain need not be geodesic.
inline CurveClass twist_curve(const CurveClass& c, const Cylinder& cyl, long long n) {
    CurveClass out = c;
    if (n == 0) return out;
    RVec core = cyl.core_holonomy();
    for (std::size_t i = 0; i < out.segments.size(); ++i) {
        int k = 0;
        if (i < out.seg_crossings.size()) {
            auto it = out.seg_crossings[i].find(cyl.id);
            if (it != out.seg_crossings[i].end()) k = it->second;
        }
        if (k != 0) out.segments[i] = out.segments[i] + Rat(n * k) * core;
    }
    out.taut = false;
    return out;
}

}  // namespace teich
