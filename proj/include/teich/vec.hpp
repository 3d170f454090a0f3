#pragma once

// Plane vectors over an arbitrary scalar plus 2x2 real matrices for
// structure deformations (rotations act on natural coordinates by half
// the differential's rotation angle).

#include "teich/rational.hpp"

#include <cmath>

namespace teich {

template <typename S>
struct Vec2 {
    S x{};
    S y{};

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    friend Vec2 operator*(const S& s, const Vec2& v) { return {s * v.x, s * v.y}; }
    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
};

template <typename S>
S dot(const Vec2<S>& a, const Vec2<S>& b) {
    return a.x * b.x + a.y * b.y;
}

template <typename S>
S cross(const Vec2<S>& a, const Vec2<S>& b) {
    return a.x * b.y - a.y * b.x;
}

using RVec = Vec2<Rat>;
using DVec = Vec2<double>;

inline DVec to_dvec(const RVec& v) { return {to_double(v.x), to_double(v.y)}; }

inline double norm(const DVec& v) { return std::hypot(v.x, v.y); }
inline double norm_sq(const DVec& v) { return v.x * v.x + v.y * v.y; }

// Row-major [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Mat2 identity() { return {}; }

    static Mat2 rotation(double angle) {
        double co = std::cos(angle), si = std::sin(angle);
        return {co, -si, si, co};
    }

    static Mat2 diagonal(double sx, double sy) { return {sx, 0.0, 0.0, sy}; }

    static Mat2 shear_x(double s) { return {1.0, s, 0.0, 1.0}; }

    DVec apply(const DVec& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }

    double det() const { return a * d - b * c; }

    bool is_identity() const { return a == 1.0 && b == 0.0 && c == 0.0 && d == 1.0; }

    // Horizontal lines stay horizontal, so cylinder annotations stay meaningful.
    bool preserves_horizontal() const { return c == 0.0 && a != 0.0 && d != 0.0; }
};

// Map of a stretch with dilatation K: (x, y) -> (K^{1/2} x, K^{-1/2} y).
inline Mat2 stretch_map(double K) {
    double s = std::sqrt(K);
    return Mat2::diagonal(s, 1.0 / s);
}

// Stretch along the direction obtained by rotating the differential by theta:
// rotate charts by theta/2, stretch, rotate back.
inline Mat2 leg_map(double theta, double K) {
    return Mat2::rotation(-theta / 2.0) * stretch_map(K) * Mat2::rotation(theta / 2.0);
}

}  // namespace teich
