#pragma once

// Quasiconformal data of powers of a Dehn twist about a cylinder of
// modulus M = (log R) / (2 pi): the optimal dilatation K_n of the n-th
// power, the angle sigma_n of its expanding direction, and the derived
// Teichmueller distance (log K_n) / 2.

#include "teich/errors.hpp"

#include <cmath>
#include <numbers>

namespace teich {

struct TwistParameters {
    double R = 0.0;        // conformal ratio of the annulus, R = e^{2 pi M}
    double M = 0.0;        // modulus
    long long n = 0;       // twist power (signed)
    double sigma_n = 0.0;  // expanding-direction angle; pi/2 at n = 0, signed with n
    double k_n = 0.0;      // eccentricity cos|sigma_n| in [0, 1)
    double K_n = 1.0;      // dilatation, >= 1
};

inline TwistParameters twist_parameters_for_modulus(double M, long long n) {
    if (!(M > 0.0)) throw TeichError(Err::BadModulus, "modulus must be positive");
    TwistParameters t;
    t.M = M;
    t.R = std::exp(2.0 * std::numbers::pi * M);
    t.n = n;
    t.sigma_n = std::atan2(2.0 * M, static_cast<double>(n));
    double x = static_cast<double>(n) / (2.0 * M);
    double ax = std::abs(x);
    t.k_n = ax / std::sqrt(1.0 + ax * ax);
    // (1 + k)/(1 - k) cancels badly for large |n|; the equivalent square
    // form keeps full precision.
    double root = std::sqrt(1.0 + ax * ax) + ax;
    t.K_n = root * root;
    return t;
}

inline TwistParameters twist_parameters(double R, long long n) {
    if (!(R > 1.0)) throw TeichError(Err::BadModulus, "annulus ratio must exceed 1");
    TwistParameters t = twist_parameters_for_modulus(std::log(R) / (2.0 * std::numbers::pi), n);
    t.R = R;
    return t;
}

inline double twist_distance(const TwistParameters& t) { return 0.5 * std::log(t.K_n); }

}  // namespace teich
