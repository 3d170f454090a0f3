#pragma once

// Deformations of flat surfaces: affine maps layered over an immutable
// base (Teichmueller stretches, rotations, area normalization), exact
// rational stretch/scale surgery, edge splitting, and cylinder plumbing
// (grow the height, re-glue the top with a twist).

#include "teich/curves.hpp"
#include "teich/errors.hpp"
#include "teich/surface.hpp"
#include "teich/vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace teich {

struct DeformedSurface {
    std::shared_ptr<const FlatSurface> base;
    Mat2 map = Mat2::identity();

    double area() const { return to_double(base->area()) * std::abs(map.det()); }

    // Cylinder/annulus annotations live in base coordinates; they stay
    // meaningful under any invertible affine map, but their cores stay
    // horizontal only when the map preserves horizontal lines.
    bool annotations_horizontal() const { return map.preserves_horizontal(); }
};

inline DeformedSurface as_deformed(std::shared_ptr<const FlatSurface> s) {
    return DeformedSurface{std::move(s), Mat2::identity()};
}

inline DeformedSurface as_deformed(const FlatSurface& s) {
    return DeformedSurface{std::make_shared<FlatSurface>(s), Mat2::identity()};
}

inline DeformedSurface apply_teich_stretch(const DeformedSurface& d, double K) {
    if (!(K > 0)) throw TeichError(Err::NonPositiveK, "stretch factor must be positive");
    DeformedSurface out = d;
    out.map = stretch_map(K) * d.map;
    return out;
}

inline DeformedSurface rotate_structure(const DeformedSurface& d, double theta) {
    DeformedSurface out = d;
    out.map = Mat2::rotation(theta) * d.map;
    return out;
}

inline DeformedSurface normalize_area(const DeformedSurface& d) {
    double a = d.area();
    if (!(a > 0)) throw TeichError(Err::ZeroArea, "cannot normalize a zero-area surface");
    double s = 1.0 / std::sqrt(a);
    DeformedSurface out = d;
    out.map = Mat2::diagonal(s, s) * d.map;
    return out;
}

// Marked point at parameter K >= 1 along the stretch leg whose expanding
// line sits at angle -theta/2 in the current charts.
inline DeformedSurface leg_point(const DeformedSurface& d, double theta, double K) {
    if (!(K >= 1.0)) throw TeichError(Err::BadK, "leg parameter K must be at least 1");
    DeformedSurface out = d;
    out.map = leg_map(theta, K) * d.map;
    return out;
}

// ---- exact rational surgery ------------------------------------------------

// Scale x by sx and y by sy on every chart, keeping gluings intact.
inline FlatSurface scale_exact(const FlatSurface& s, const Rat& sx, const Rat& sy) {
    if (sx <= 0 || sy <= 0)
        throw TeichError(Err::BadK, "exact scaling factors must be positive");
    FlatSurface out = s;
    for (Polygon& p : out.polygons)
        for (RVec& e : p.edges) e = RVec{sx * e.x, sy * e.y};
    for (Cylinder& c : out.cylinders) {
        c.circumference *= sx;
        c.height *= sy;
    }
    return out;
}

// Teichmueller stretch with exact arithmetic; K must be a square of a
// rational for the stretched periods to stay rational.
inline FlatSurface apply_teich_stretch(const FlatSurface& s, const Rat& K) {
    if (K <= 0) throw TeichError(Err::NonPositiveK, "stretch factor must be positive");
    auto r = exact_sqrt(K);
    if (!r) throw TeichError(Err::BadK, "exact stretch needs K to be a rational square");
    return scale_exact(s, *r, 1 / *r);
}

inline FlatSurface normalize_area_exact(const FlatSurface& s) {
    Rat a = s.area();
    if (a <= 0) throw TeichError(Err::ZeroArea, "cannot normalize a zero-area surface");
    auto r = exact_sqrt(a);
    if (!r) throw TeichError(Err::BadK, "exact normalization needs the area to be a rational square");
    return scale_exact(s, 1 / *r, 1 / *r);
}

// Companion transform for curve data when a chart is rescaled.
inline CurveClass scale_curve(const CurveClass& c, const Rat& sx, const Rat& sy) {
    CurveClass out = c;
    out.start = RVec{sx * c.start.x, sy * c.start.y};
    for (RVec& seg : out.segments) seg = RVec{sx * seg.x, sy * seg.y};
    return out;
}

namespace detail {

struct TokenEdge {
    RVec vec;
    int token;  // index into the token table; two edge slots share each token
};

struct TokenSurface {
    std::vector<std::vector<TokenEdge>> polys;
    std::vector<bool> flips;  // per token

    static TokenSurface from(const FlatSurface& s) {
        TokenSurface t;
        t.polys.resize(s.polygons.size());
        for (std::size_t p = 0; p < s.polygons.size(); ++p) {
            t.polys[p].resize(s.polygons[p].edges.size());
            for (std::size_t e = 0; e < s.polygons[p].edges.size(); ++e)
                t.polys[p][e] = {s.polygons[p].edges[e], -1};
        }
        t.flips.resize(s.pairings.size());
        for (std::size_t i = 0; i < s.pairings.size(); ++i) {
            const Pairing& pr = s.pairings[i];
            t.polys[pr.a.poly][pr.a.edge].token = static_cast<int>(i);
            t.polys[pr.b.poly][pr.b.edge].token = static_cast<int>(i);
            t.flips[i] = pr.flip;
        }
        return t;
    }

    std::vector<std::pair<int, int>> slots_of(int token) const {
        std::vector<std::pair<int, int>> out;
        for (std::size_t p = 0; p < polys.size(); ++p)
            for (std::size_t e = 0; e < polys[p].size(); ++e)
                if (polys[p][e].token == token) out.push_back({static_cast<int>(p),
                                                               static_cast<int>(e)});
        return out;
    }

    // Split the edge pair containing `anchor` at parameter s measured
    // along the anchor slot; partner parameters correspond via s <-> 1-s,
    // so the first half of one side pairs with the second half of the other.
    void split(int anchor_poly, int anchor_edge, const Rat& s) {
        if (s <= 0 || s >= 1)
            throw TeichError(Err::InternalError, "edge split parameter out of range");
        int token = polys[anchor_poly][anchor_edge].token;
        auto slots = slots_of(token);
        if (slots.size() != 2)
            throw TeichError(Err::InternalError, "token does not mark an edge pair");
        if (slots[0] != std::make_pair(anchor_poly, anchor_edge)) std::swap(slots[0], slots[1]);
        if (slots[0] != std::make_pair(anchor_poly, anchor_edge))
            throw TeichError(Err::InternalError, "split anchor does not carry its token");
        int t1 = static_cast<int>(flips.size());
        int t2 = t1 + 1;
        flips.push_back(flips[token]);
        flips.push_back(flips[token]);
        auto [pa, ea] = slots[0];
        auto [pb, eb] = slots[1];
        RVec va = polys[pa][ea].vec;
        RVec vb = polys[pb][eb].vec;
        std::vector<TokenEdge> a_pieces{{s * va, t1}, {(1 - s) * va, t2}};
        std::vector<TokenEdge> b_pieces{{(1 - s) * vb, t2}, {s * vb, t1}};
        // Replace the higher index first when both slots share a polygon,
        // so the other slot's index stays valid.
        auto replace = [&](int p, int e, const std::vector<TokenEdge>& pieces) {
            polys[p].erase(polys[p].begin() + e);
            polys[p].insert(polys[p].begin() + e, pieces.begin(), pieces.end());
        };
        if (pa == pb && ea < eb) {
            replace(pb, eb, b_pieces);
            replace(pa, ea, a_pieces);
        } else {
            replace(pa, ea, a_pieces);
            replace(pb, eb, b_pieces);
        }
    }

    FlatSurface to_surface(const FlatSurface& original) const {
        FlatSurface out;
        out.name = original.name;
        out.cylinders = original.cylinders;
        out.polygons.resize(polys.size());
        std::map<int, std::vector<EdgeRef>> token_slots;
        for (std::size_t p = 0; p < polys.size(); ++p) {
            out.polygons[p].id = original.polygons[p].id;
            out.polygons[p].edges.reserve(polys[p].size());
            for (std::size_t e = 0; e < polys[p].size(); ++e) {
                out.polygons[p].edges.push_back(polys[p][e].vec);
                token_slots[polys[p][e].token].push_back(
                    {static_cast<int>(p), static_cast<int>(e)});
            }
        }
        for (const auto& [token, slots] : token_slots) {
            if (token < 0 || slots.size() != 2)
                throw TeichError(Err::InternalError, "pairing tokens are inconsistent");
            out.pairings.push_back({slots[0], slots[1], flips[token]});
        }
        return out;
    }
};

// Rectangle boundary pieces of a validated cylinder polygon, with x-spans
// relative to the lower-left corner.
struct RectanglePieces {
    struct Piece {
        int edge;
        Rat x_lo, x_hi;
    };
    std::vector<Piece> bottom, top;  // each sorted by ascending x_lo
    int left = -1, right = -1;
};

inline RectanglePieces rectangle_pieces(const FlatSurface& s, const Cylinder& c) {
    const Polygon& p = s.polygons[c.poly];
    RVec lo = polygon_min_corner(p);
    auto verts = p.vertices();
    RectanglePieces out;
    for (int i = 0; i < p.size(); ++i) {
        RVec at = verts[i] - lo;
        const RVec& e = p.edges[i];
        if (e.y == 0 && at.y == 0)
            out.bottom.push_back({i, at.x, at.x + e.x});
        else if (e.y == 0 && at.y == c.height)
            out.top.push_back({i, at.x + e.x, at.x});
        else if (e.x == 0 && at.x == 0)
            out.left = i;
        else if (e.x == 0 && at.x == c.circumference)
            out.right = i;
        else
            throw TeichError(Err::BadCylinder,
                             "cylinder " + c.id + " polygon is not a wrapped rectangle");
    }
    auto by_x = [](const RectanglePieces::Piece& a, const RectanglePieces::Piece& b) {
        return a.x_lo < b.x_lo;
    };
    std::sort(out.bottom.begin(), out.bottom.end(), by_x);
    std::sort(out.top.begin(), out.top.end(), by_x);
    if (out.left < 0 || out.right < 0 || out.bottom.empty() || out.top.empty())
        throw TeichError(Err::BadCylinder,
                         "cylinder " + c.id + " polygon is not a wrapped rectangle");
    return out;
}

}  // namespace detail

// Grow a cylinder's height by dh and re-glue its top with an extra twist
// of tf core circumferences. The complement of the cylinder is untouched
// (up to one edge split), so annotations away from it keep their meaning.
inline FlatSurface plumb(const FlatSurface& s, const std::string& cyl_id, const Rat& dh,
                         const Rat& tf) {
    const Cylinder* cyl = s.find_cylinder(cyl_id);
    if (cyl == nullptr)
        throw TeichError(Err::UnknownCylinder, "no cylinder named " + cyl_id);
    if (dh < 0)
        throw TeichError(Err::BadCylinder, "plumbing cannot shrink cylinder " + cyl_id);

    Rat frac = tf - Rat(boost::multiprecision::numerator(tf) /
                        boost::multiprecision::denominator(tf));
    if (frac < 0) frac += 1;
    Rat delta = frac * cyl->circumference;
    if (delta == 0 && dh == 0) return s;

    // Work on a token-annotated copy; split the top at the wrap point of
    // the twist so every top piece moves rigidly.
    detail::TokenSurface tok = detail::TokenSurface::from(s);
    int poly = cyl->poly;

    {
        auto pieces = detail::rectangle_pieces(s, *cyl);
        auto pm = s.pairing_map();
        for (const auto& piece : pieces.top) {
            EdgeRef here{poly, piece.edge};
            EdgeRef there = pm.at(here).first;
            if (there.poly == poly) {
                // Partner inside the same polygon is fine only on the bottom.
                bool partner_is_top = false;
                for (const auto& other : pieces.top)
                    if (other.edge == there.edge) partner_is_top = true;
                if (partner_is_top || there.edge == pieces.left || there.edge == pieces.right)
                    throw TeichError(Err::BadCylinder,
                                     "cylinder " + cyl_id +
                                         " top is glued to itself; plumbing is not supported");
            }
        }
        if (delta != 0) {
            Rat cut = cyl->circumference - delta;
            for (const auto& piece : pieces.top) {
                if (piece.x_lo < cut && cut < piece.x_hi) {
                    // Top pieces run right-to-left: parameter 0 is at x_hi.
                    Rat t = (piece.x_hi - cut) / (piece.x_hi - piece.x_lo);
                    tok.split(poly, piece.edge, t);
                    break;
                }
            }
        }
    }

    // Rebuild the plumbed polygon from the post-split pieces.
    FlatSurface mid = tok.to_surface(s);
    Cylinder grown = *cyl;
    grown.height += dh;
    for (Cylinder& c : mid.cylinders)
        if (c.id == cyl_id) c.height = grown.height;

    detail::TokenSurface tok2 = detail::TokenSurface::from(mid);
    {
        Cylinder pre = grown;
        pre.height = cyl->height;  // geometry still has the old height here
        auto pieces = detail::rectangle_pieces(mid, pre);
        const auto& slots = tok2.polys[poly];
        Rat c_len = cyl->circumference;
        Rat cut = c_len - delta;

        std::vector<detail::TokenEdge> rebuilt;
        for (const auto& piece : pieces.bottom) rebuilt.push_back(slots[piece.edge]);
        {
            detail::TokenEdge right = slots[pieces.right];
            right.vec = RVec{Rat(0), grown.height};
            rebuilt.push_back(right);
        }
        // Tops in right-to-left order of their post-twist positions: the
        // block left of the cut lands on [delta, c], the rest wraps to
        // [0, delta].
        for (auto it = pieces.top.rbegin(); it != pieces.top.rend(); ++it)
            if (it->x_hi <= cut) rebuilt.push_back(slots[it->edge]);
        for (auto it = pieces.top.rbegin(); it != pieces.top.rend(); ++it)
            if (it->x_lo >= cut) rebuilt.push_back(slots[it->edge]);
        {
            detail::TokenEdge left = slots[pieces.left];
            left.vec = RVec{Rat(0), -grown.height};
            rebuilt.push_back(left);
        }
        if (rebuilt.size() != slots.size())
            throw TeichError(Err::InternalError, "plumb lost track of boundary pieces");
        tok2.polys[poly] = std::move(rebuilt);
    }

    FlatSurface out = tok2.to_surface(mid);
    return out;
}

}  // namespace teich
