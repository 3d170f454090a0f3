#pragma once

// Closed-form flat-torus oracle: extremal lengths, the exact Teichmueller
// distance on the upper half plane, the Kerckhoff bound over a finite
// class family, geodesic sampling, and the control triangle whose
// thinness stays bounded.

#include "teich/curves.hpp"
#include "teich/errors.hpp"
#include "teich/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace teich {

struct TorusPoint {
    double re = 0.0;
    double im = 1.0;
};

inline TorusPoint make_tau(double re, double im) {
    if (!(im > 0.0)) throw TeichError(Err::BadTau, "tau must lie in the upper half plane");
    return {re, im};
}

// Extremal length of the class p A + q B on the torus C / (Z + tau Z).
inline double torus_ext(const TorusPoint& tau, long long p, long long q) {
    double x = static_cast<double>(p) + static_cast<double>(q) * tau.re;
    double y = static_cast<double>(q) * tau.im;
    return (x * x + y * y) / tau.im;
}

// Teichmueller distance = hyperbolic half-distance on the upper half plane.
inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    double dx = a.re - b.re;
    double dy = a.im - b.im;
    double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * a.im * b.im);
    return 0.5 * std::acosh(arg);
}

// Best Kerckhoff bound over primitive classes with |p|, |q| <= height.
inline double torus_kerckhoff(const TorusPoint& a, const TorusPoint& b, int height) {
    if (height < 1) throw TeichError(Err::BadTau, "class family height must be positive");
    double best = 1.0;
    for (long long p = -height; p <= height; ++p)
        for (long long q = -height; q <= height; ++q) {
            if (p == 0 && q == 0) continue;
            if (std::gcd(p, q) != 1) continue;
            double r = torus_ext(a, p, q) / torus_ext(b, p, q);
            best = std::max(best, std::max(r, 1.0 / r));
        }
    return 0.5 * std::log(best);
}

// k+1 points along the hyperbolic geodesic from a to b, uniformly spaced
// in arc length (endpoints included).
inline std::vector<TorusPoint> geodesic_sample(const TorusPoint& a, const TorusPoint& b,
                                               int k) {
    if (k < 1) throw TeichError(Err::BadTau, "geodesic sampling needs at least one step");
    std::vector<TorusPoint> out;
    out.reserve(k + 1);
    if (a.re == b.re) {
        double ratio = b.im / a.im;
        for (int j = 0; j <= k; ++j)
            out.push_back({a.re, a.im * std::pow(ratio, static_cast<double>(j) / k)});
        return out;
    }
    double center = (b.re * b.re + b.im * b.im - a.re * a.re - a.im * a.im) /
                    (2.0 * (b.re - a.re));
    double radius = std::hypot(a.re - center, a.im);
    auto param = [&](const TorusPoint& t) {
        double phi = std::atan2(t.im, t.re - center);
        return std::log(std::tan(phi / 2.0));  // arc length along the semicircle
    };
    double s0 = param(a), s1 = param(b);
    for (int j = 0; j <= k; ++j) {
        double s = s0 + (s1 - s0) * static_cast<double>(j) / k;
        double phi = 2.0 * std::atan(std::exp(s));
        out.push_back({center + radius * std::cos(phi), radius * std::sin(phi)});
    }
    return out;
}

struct ControlTriangle {
    long long n = 0;
    TorusPoint x0, y1, y2, y_star;
    double delta_hat = 0.0;  // sampled distance from y_star to the two legs
};

// The genus-one control: x0 = i, y1 = i - n, y2 = i + n. The side from y1
// to y2 is the semicircle through i sqrt(1 + n^2); the midpoint's distance
// to the legs stays bounded as n grows, which is exactly the hyperbolic
// thinness that higher genus lacks.
inline ControlTriangle control_triangle_delta(long long n, int samples = 64) {
    if (n < 1) throw TeichError(Err::BadN, "control triangle needs n >= 1");
    ControlTriangle ct;
    ct.n = n;
    ct.x0 = {0.0, 1.0};
    ct.y1 = {-static_cast<double>(n), 1.0};
    ct.y2 = {static_cast<double>(n), 1.0};
    ct.y_star = {0.0, std::sqrt(1.0 + static_cast<double>(n) * static_cast<double>(n))};
    double best = std::numeric_limits<double>::infinity();
    for (const TorusPoint& leg_end : {ct.y1, ct.y2})
        for (const TorusPoint& z : geodesic_sample(ct.x0, leg_end, samples))
            best = std::min(best, torus_distance(ct.y_star, z));
    ct.delta_hat = best;
    return ct;
}

// Chain on a one-cylinder square torus fixture representing p A + q B,
// where A is the horizontal core and B the vertical circle. The start
// point is chosen so the straight representative avoids all vertices and
// never has a junction on the core circle.
inline CurveClass torus_class_curve(const FlatSurface& s, long long p, long long q) {
    if (s.cylinders.size() != 1)
        throw TeichError(Err::FixtureIncomplete,
                         "torus class chains need exactly one annotated cylinder");
    if (p == 0 && q == 0)
        throw TeichError(Err::BadN, "the trivial class has no geodesic representative");
    const Cylinder& cyl = s.cylinders.front();
    CurveClass c;
    c.name = "class(" + std::to_string(p) + "," + std::to_string(q) + ")";
    c.poly = cyl.poly;
    c.start = RVec{rat(1, 101), rat(1, 103)};
    c.segments.push_back(RVec{Rat(p) * cyl.circumference, Rat(q) * cyl.height});
    c.seg_crossings.push_back({});
    if (q != 0) c.seg_crossings.back()[cyl.id] = static_cast<int>(q);
    c.taut = true;
    return c;
}

}  // namespace teich
