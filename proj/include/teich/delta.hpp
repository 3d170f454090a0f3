#pragma once

// Four-point hyperbolicity defect: for a quadruple in a metric space,
// pair the points three ways and compare the two largest pairing sums.
// Trees give exactly zero; the euclidean unit square gives (sqrt 2 - 1)/2.

#include "teich/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace teich {

using DistanceMatrix = std::vector<std::vector<double>>;

inline void check_metric(const DistanceMatrix& d, double tol = 1e-9) {
    std::size_t n = d.size();
    for (const auto& row : d)
        if (row.size() != n)
            throw TeichError(Err::NotAMetric, "distance matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d[i][i]) > tol)
            throw TeichError(Err::NotAMetric, "nonzero diagonal entry");
        for (std::size_t j = 0; j < n; ++j) {
            if (d[i][j] < -tol)
                throw TeichError(Err::NotAMetric, "negative distance");
            if (std::abs(d[i][j] - d[j][i]) > tol)
                throw TeichError(Err::NotAMetric, "distance matrix is not symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (d[i][j] > d[i][k] + d[k][j] + tol)
                    throw TeichError(Err::NotAMetric, "triangle inequality fails");
}

// (largest pairing sum - second largest) / 4 for one quadruple of indices.
inline double four_point_delta(const DistanceMatrix& d, std::size_t a, std::size_t b,
                               std::size_t c, std::size_t e) {
    std::array<double, 3> sums = {d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]};
    std::sort(sums.begin(), sums.end());
    return (sums[2] - sums[1]) / 4.0;
}

inline double four_point_delta(const DistanceMatrix& d) {
    check_metric(d);
    if (d.size() != 4)
        throw TeichError(Err::NotAMetric, "four-point delta needs exactly four points");
    return four_point_delta(d, 0, 1, 2, 3);
}

// Worst quadruple over the whole matrix.
inline double max_four_point_delta(const DistanceMatrix& d) {
    check_metric(d);
    std::size_t n = d.size();
    if (n < 4) throw TeichError(Err::NotAMetric, "need at least four points");
    double best = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t e = c + 1; e < n; ++e)
                    best = std::max(best, four_point_delta(d, a, b, c, e));
    return best;
}

}  // namespace teich
