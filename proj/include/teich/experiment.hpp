#pragma once

// The thin-triangle experiment: resolve a two-cylinder fixture into a
// triangle instance, build the midpoint of the twist-twist side, certify
// extremal-length growth and uniform leg bounds, and sweep the thinness
// lower bound over a range of twist powers.

#include "teich/bounds.hpp"
#include "teich/curves.hpp"
#include "teich/deform.hpp"
#include "teich/errors.hpp"
#include "teich/fixture_io.hpp"
#include "teich/format.hpp"
#include "teich/surface.hpp"
#include "teich/tracer.hpp"
#include "teich/twist_params.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace teich {

struct TriangleInstance {
    std::shared_ptr<const FlatSurface> base;
    ValidationReport report;
    Cylinder c1, c2;            // the two twist cylinders (equal moduli)
    CurveClass beta1, beta2;    // their cores
    CurveClass gamma1, gamma2;  // gamma_i crosses c_i once and c_{3-i} never
    Annulus a1, a2;             // strip annulus around gamma_i
    Rat modulus;                // common modulus M = h / c
};

// Identify the triangle data by what the curves do, not by their names:
// cores wrap a cylinder once without crossings, the gamma curves cross
// exactly one cylinder exactly once, and each gamma carries a strip
// annulus.
inline TriangleInstance resolve_triangle(const Fixture& f) {
    TriangleInstance inst;
    inst.report = validate_fixture(f);
    if (!inst.report.ok())
        throw TeichError(Err::ValidationFailure,
                         "fixture fails validation: " + inst.report.issues.front().message);
    if (f.surface.cylinders.size() != 2)
        throw TeichError(Err::FixtureIncomplete,
                         "the experiment needs exactly two annotated cylinders");
    inst.base = std::make_shared<FlatSurface>(f.surface);
    inst.c1 = f.surface.cylinders[0];
    inst.c2 = f.surface.cylinders[1];
    if (inst.c1.modulus() != inst.c2.modulus())
        throw TeichError(Err::FixtureIncomplete,
                         "the twist cylinders must have equal moduli");
    inst.modulus = inst.c1.modulus();

    bool found_b1 = false, found_b2 = false, found_g1 = false, found_g2 = false;
    for (const CurveClass& c : f.curves) {
        auto tr = trace_curve(f.surface, c);
        if (!tr.closed) continue;
        auto count = [&](const Cylinder& cyl) {
            auto it = tr.crossings.find(cyl.id);
            return it == tr.crossings.end() ? 0 : it->second;
        };
        int n1 = count(inst.c1), n2 = count(inst.c2);
        auto is_core = [&](const Cylinder& cyl) {
            RVec core = cyl.core_holonomy();
            return tr.smooth && tr.visited.size() == 1 && tr.visited.count(cyl.poly) == 1 &&
                   (tr.net == core || tr.net == -core);
        };
        if (n1 == 0 && n2 == 0 && is_core(inst.c1) && !found_b1) {
            inst.beta1 = c;
            found_b1 = true;
        } else if (n1 == 0 && n2 == 0 && is_core(inst.c2) && !found_b2) {
            inst.beta2 = c;
            found_b2 = true;
        } else if (std::abs(n1) == 1 && n2 == 0 && !found_g1) {
            inst.gamma1 = c;
            found_g1 = true;
        } else if (n1 == 0 && std::abs(n2) == 1 && !found_g2) {
            inst.gamma2 = c;
            found_g2 = true;
        }
    }
    if (!found_b1 || !found_b2)
        throw TeichError(Err::FixtureIncomplete, "missing a core curve for a twist cylinder");
    if (!found_g1 || !found_g2)
        throw TeichError(Err::FixtureIncomplete,
                         "missing a curve crossing exactly one twist cylinder once");

    const Annulus* a1 = f.find_annulus_for(inst.gamma1.name);
    const Annulus* a2 = f.find_annulus_for(inst.gamma2.name);
    if (a1 == nullptr || a2 == nullptr)
        throw TeichError(Err::FixtureIncomplete,
                         "each crossing curve needs a strip annulus around it");
    inst.a1 = *a1;
    inst.a2 = *a2;
    return inst;
}

inline TriangleInstance load_triangle(const std::string& fixture_path) {
    return resolve_triangle(load_fixture(fixture_path));
}

// A vertex of the triangle: a flat structure (as an affine deformation of
// the base) together with representatives of the reference classes in
// this vertex's marking.
struct MarkedPoint {
    std::string label;
    DeformedSurface structure;
    CurveClass beta1, beta2, gamma1, gamma2;
};

inline TwistParameters instance_twist_parameters(const TriangleInstance& inst, long long n) {
    return twist_parameters_for_modulus(to_double(inst.modulus), n);
}

inline double theta_star(const TwistParameters& t) { return t.sigma_n - std::numbers::pi; }

// x0, then y1 = the n-th twist about c1, then y2 = the inverse n-th twist
// about c2. Twisting changes markings, not the flat structure, so all
// three structures are the identity deformation with transported curves.
inline std::array<MarkedPoint, 3> triangle_vertices(const TriangleInstance& inst,
                                                    long long n) {
    if (n < 1) throw TeichError(Err::BadN, "the triangle family needs n >= 1");
    std::array<MarkedPoint, 3> out;
    out[0] = {"x0", as_deformed(inst.base), inst.beta1, inst.beta2, inst.gamma1, inst.gamma2};
    out[1] = {"y1",
              as_deformed(inst.base),
              twist_curve(inst.beta1, inst.c1, -n),
              twist_curve(inst.beta2, inst.c1, -n),
              twist_curve(inst.gamma1, inst.c1, -n),
              twist_curve(inst.gamma2, inst.c1, -n)};
    out[2] = {"y2",
              as_deformed(inst.base),
              twist_curve(inst.beta1, inst.c2, n),
              twist_curve(inst.beta2, inst.c2, n),
              twist_curve(inst.gamma1, inst.c2, n),
              twist_curve(inst.gamma2, inst.c2, n)};
    return out;
}

// Midpoint of the side [y1, y2]: the multitwist relating the endpoints is
// the affine shear by n/M, whose stretch leg starts at y1 with expanding
// angle (pi - sigma_n)/2; halfway along, the accumulated stretch is
// sqrt(K_n). Classes are carried in the y1 marking.
inline MarkedPoint midpoint_y_star(const TriangleInstance& inst, long long n) {
    if (n < 1) throw TeichError(Err::BadN, "the triangle family needs n >= 1");
    TwistParameters t = instance_twist_parameters(inst, n);
    auto vertices = triangle_vertices(inst, n);
    MarkedPoint mid = vertices[1];
    mid.label = "y_star";
    mid.structure = leg_point(mid.structure, theta_star(t), std::sqrt(t.K_n));
    return mid;
}

// Uniform upper bound for Ext(gamma_i) over the leg [x0, y_{3-i}], modeled
// by the plumbing family of the other cylinder: the strip annulus around
// gamma_i must be untouched by every plumb in the sampled grid, so its
// modulus bound holds uniformly.
inline double uniform_leg_bound(const TriangleInstance& inst, int leg_curve, long long n,
                                int grid = 8) {
    if (leg_curve != 1 && leg_curve != 2)
        throw TeichError(Err::BadN, "leg curve index must be 1 or 2");
    if (n < 1) throw TeichError(Err::BadN, "the triangle family needs n >= 1");
    const Annulus& a = (leg_curve == 1) ? inst.a1 : inst.a2;
    const CurveClass& gamma = (leg_curve == 1) ? inst.gamma1 : inst.gamma2;
    const Cylinder& plumbed = (leg_curve == 1) ? inst.c2 : inst.c1;
    if (a.poly == plumbed.poly)
        throw TeichError(Err::AnnulusTouchesCore,
                         "annulus " + a.id + " lives on the cylinder the leg deforms");

    Rat mod0 = annulus_modulus(*inst.base, a);
    for (int j = 0; j <= grid; ++j) {
        for (int k = 0; k <= grid; ++k) {
            Rat dh = Rat(j) * Rat(n) * plumbed.height / grid;
            Rat tf = Rat(k) * Rat(n) / grid;
            FlatSurface plumbed_surface = plumb(*inst.base, plumbed.id, dh, tf);
            auto rep = validate(plumbed_surface);
            if (!rep.ok())
                throw TeichError(Err::UnboundedLeg,
                                 "a plumbed surface along the leg fails validation");
            auto tr = trace_curve(plumbed_surface, gamma);
            if (!tr.closed || !annulus_encloses(plumbed_surface, a, gamma, tr))
                throw TeichError(Err::UnboundedLeg,
                                 "annulus " + a.id + " does not survive the leg family");
            if (annulus_modulus(plumbed_surface, a) != mod0)
                throw TeichError(Err::UnboundedLeg,
                                 "annulus " + a.id + " modulus is not plumb-invariant");
        }
    }
    return to_double(Rat(1) / mod0);
}

struct DeltaBound {
    long long n = 0;
    double K_n = 1.0;
    double delta_lo = 0.0;
    double ext_lo_gamma1 = 0.0;
    double ext_lo_gamma2 = 0.0;
    double leg_hi_1 = 0.0;
    double leg_hi_2 = 0.0;
};

// Certified lower bound for the distance from y_star to the union of the
// two legs: Kerckhoff's inequality with a certified lower bound at
// y_star and the uniform leg bound, minimized over the two crossing
// curves.
inline DeltaBound delta_lower_bound(const TriangleInstance& inst, long long n, int grid = 8) {
    TwistParameters t = instance_twist_parameters(inst, n);
    MarkedPoint mid = midpoint_y_star(inst, n);

    DeltaBound out;
    out.n = n;
    out.K_n = t.K_n;
    out.ext_lo_gamma1 = ext_interval(mid.gamma1, mid.structure).lo;
    out.ext_lo_gamma2 = ext_interval(mid.gamma2, mid.structure).lo;
    out.leg_hi_1 = uniform_leg_bound(inst, 1, n, grid);
    out.leg_hi_2 = uniform_leg_bound(inst, 2, n, grid);
    double d1 = std::max(0.0, 0.5 * std::log(out.ext_lo_gamma1 / out.leg_hi_1));
    double d2 = std::max(0.0, 0.5 * std::log(out.ext_lo_gamma2 / out.leg_hi_2));
    out.delta_lo = std::min(d1, d2);
    return out;
}

// Certified lower bound for Ext at y2 of gamma2's class; its growth in n
// is the quadratic-extremal-length signature of the twist family.
inline double ext_lo_gamma2_at_y2(const TriangleInstance& inst, long long n) {
    auto vertices = triangle_vertices(inst, n);
    return ext_interval(vertices[2].gamma2, vertices[2].structure).lo;
}

struct SweepRow {
    DeltaBound bound;
    double ms = 0.0;
};

// One row per twist power, computed in parallel with a deterministic
// ordered merge; only the wall-time column depends on the machine.
inline std::vector<SweepRow> sweep(const TriangleInstance& inst,
                                   const std::vector<long long>& n_list, int grid = 8) {
    if (n_list.empty()) throw TeichError(Err::EmptyFamily, "sweep needs at least one n");
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(n_list.size());
    for (long long n : n_list)
        jobs.push_back(std::async(std::launch::async, [&inst, n, grid] {
            auto start = std::chrono::steady_clock::now();
            SweepRow row;
            row.bound = delta_lower_bound(inst, n, grid);
            row.ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
            return row;
        }));
    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (auto& job : jobs) rows.push_back(job.get());
    return rows;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw TeichError(Err::EmptyFamily, "a line fit needs at least two points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

inline LineFit fit_delta_slope(const std::vector<SweepRow>& rows) {
    std::vector<double> xs, ys;
    for (const SweepRow& r : rows) {
        xs.push_back(std::log(static_cast<double>(r.bound.n)));
        ys.push_back(r.bound.delta_lo);
    }
    return least_squares(xs, ys);
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw TeichError(Err::ValidationFailure, "cannot write " + path);
    out << "n,K_n,delta_lo,ext_lo_gamma1,ext_lo_gamma2,leg_hi_1,leg_hi_2,ms\n";
    for (const SweepRow& r : rows) {
        out << r.bound.n << ',' << fmt12(r.bound.K_n) << ',' << fmt12(r.bound.delta_lo) << ','
            << fmt12(r.bound.ext_lo_gamma1) << ',' << fmt12(r.bound.ext_lo_gamma2) << ','
            << fmt12(r.bound.leg_hi_1) << ',' << fmt12(r.bound.leg_hi_2) << ',' << fmt12(r.ms)
            << '\n';
    }
}

inline void write_plot_data(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw TeichError(Err::ValidationFailure, "cannot write " + path);
    out << "n,log_n,delta_lo\n";
    for (const SweepRow& r : rows)
        out << r.bound.n << ',' << fmt12(std::log(static_cast<double>(r.bound.n))) << ','
            << fmt12(r.bound.delta_lo) << '\n';
}

}  // namespace teich
