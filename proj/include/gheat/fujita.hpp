#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "gheat/heat_kernel.hpp"
#include "gheat/semilinear.hpp"

namespace gheat {

/// J0(t) = sum_x mu(x) p(t,e,x) a(x) = (P_t a)(e): the linear flow
/// started from a, observed at the base vertex.
inline double j0_functional(const HeatKernelOperator& hk, const Field& a, double t, int e) {
    const Graph& g = hk.graph();
    detail::check_field(g, a, "j0_functional");
    require(std::isfinite(t) && t > 0.0, errc::invalid_parameter, "j0 time must be positive");
    require(e >= 0 && e < g.vertex_count(), errc::unknown_vertex, "base vertex out of range");
    double max_a = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        require(std::isfinite(a[i]) && a[i] >= 0.0, errc::invalid_parameter,
                "j0 initial data must be nonnegative and finite");
        max_a = std::max(max_a, a[i]);
    }
    require(max_a > 0.0 && a[e] > 0.0, errc::invalid_parameter,
            "j0 initial data must be nontrivial and positive at the base vertex");

    double acc = 0.0;
    for (int x = 0; x < g.vertex_count(); ++x) acc += g.mu(x) * hk.value(t, e, x) * a[x];
    return acc;
}

struct BlowupInequalityReport {
    std::vector<double> times;      ///< trajectory times with t > 0
    std::vector<double> residuals;  ///< J0(t)^{-a} - u(t,e)^{-a} - a*t
    double min_residual = 0.0;
};

/**
 * Residuals of the blow-up comparison inequality along a trajectory:
 * r(t) = J0(t)^{-alpha} - u(t,e)^{-alpha} - alpha*t, which is
 * nonnegative for exact solutions and exactly zero for spatially
 * constant data (then u(t,e) solves v' = v^{1+alpha} and J0 = v(0)).
 */
inline BlowupInequalityReport verify_blowup_inequality(const Trajectory& traj,
                                                       const HeatKernelOperator& hk, int e,
                                                       double alpha) {
    require(!traj.times.empty(), errc::invalid_parameter, "empty trajectory");
    require(std::isfinite(alpha) && alpha > 0.0, errc::invalid_parameter,
            "alpha must be positive");
    const Graph& g = hk.graph();
    require(e >= 0 && e < g.vertex_count(), errc::unknown_vertex, "base vertex out of range");
    require(!traj.states.empty() &&
                traj.states.front().size() == g.vertex_count(),
            errc::dimension_mismatch, "trajectory does not match the kernel's graph");

    const Field& a = traj.states.front();
    BlowupInequalityReport rep;
    rep.min_residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t <= 0.0) continue;
        const double ue = traj.states[i][e];
        if (ue <= 0.0)
            fail(errc::singular_evaluation,
                 "u(t,e) vanished at t = " + format_double(t) +
                     "; the inequality residual is undefined there");
        const double j0 = j0_functional(hk, a, t, e);
        const double r = std::pow(j0, -alpha) - std::pow(ue, -alpha) - alpha * t;
        rep.times.push_back(t);
        rep.residuals.push_back(r);
        rep.min_residual = std::min(rep.min_residual, r);
    }
    require(!rep.times.empty(), errc::invalid_parameter,
            "trajectory has no positive times to evaluate");
    return rep;
}

/// Constants for the logarithmic-volume nonexistence inequality
/// (t log t)^{m a} >= a Cbar^a t with Cbar = mu(e) a(e) / (4 c0 C0^m);
/// C0 must exceed 2 D_mu e.
struct LogVolumeMode {
    double c0 = 0.0;
    double C0 = 0.0;
};

/// Constants for the polynomial-volume variant t^{m a / 2} >= a Cbar'^a t
/// with a directly supplied Cbar'.
struct PolyVolumeMode {
    double c_bar_prime = 0.0;
};

using NonexistenceMode = std::variant<LogVolumeMode, PolyVolumeMode>;

struct NonexistenceReport {
    double m_alpha = 0.0;
    double c_bar = 0.0;  ///< the constant entering the right-hand side
    bool crossed = false;
    std::optional<double> crossing_time;  ///< refined first time the inequality fails for good
    bool failed_everywhere = false;       ///< already failing at the grid start
    std::vector<double> grid;
    std::vector<double> lhs;
    std::vector<double> rhs;
};

/**
 * Evaluate the nonexistence inequality over a logarithmic time grid and
 * locate the tail crossing: the first grid point from which the
 * inequality fails at every later point. The crossing is refined by
 * bisection. A crossing is the contradiction witness that rules out
 * global solutions in the subcritical regime; supercritical exponents
 * (m*alpha/2 > 1 in the polynomial mode) produce no crossing.
 */
inline NonexistenceReport nonexistence_inequality_check(const Graph& g, const Field& a, int e,
                                                        double alpha, double m,
                                                        const NonexistenceMode& mode,
                                                        double t_lo, double t_hi,
                                                        int grid_points = 200) {
    detail::check_field(g, a, "nonexistence check");
    require(e >= 0 && e < g.vertex_count(), errc::unknown_vertex, "base vertex out of range");
    require(std::isfinite(alpha) && alpha > 0.0, errc::invalid_parameter,
            "alpha must be positive");
    require(std::isfinite(m) && m > 0.0, errc::invalid_parameter,
            "growth degree m must be positive");
    require(grid_points >= 2, errc::invalid_parameter, "grid needs at least two points");
    require(t_lo > 0.0 && t_hi > t_lo, errc::invalid_parameter,
            "need 0 < t_lo < t_hi");

    NonexistenceReport rep;
    rep.m_alpha = m * alpha;

    const bool log_mode = std::holds_alternative<LogVolumeMode>(mode);
    if (log_mode) {
        const auto& lm = std::get<LogVolumeMode>(mode);
        const double d_mu = g.structural_constants().d_mu;
        const double floor_c0 = 2.0 * d_mu * std::exp(1.0);
        require(lm.c0 > 0.0, errc::invalid_parameter, "c0 must be positive");
        require(lm.C0 > floor_c0, errc::invalid_parameter,
                "C0 must exceed 2 D_mu e = " + format_double(floor_c0) + ", got " +
                    format_double(lm.C0));
        require(a[e] > 0.0, errc::invalid_parameter, "initial data must be positive at e");
        rep.c_bar = g.mu(e) * a[e] / (4.0 * lm.c0 * std::pow(lm.C0, m));
        require(t_lo > 1.0, errc::invalid_parameter,
                "logarithmic mode needs t_lo > 1 so log t > 0");
    } else {
        const auto& pm = std::get<PolyVolumeMode>(mode);
        require(pm.c_bar_prime > 0.0, errc::invalid_parameter, "Cbar' must be positive");
        rep.c_bar = pm.c_bar_prime;
    }

    auto lhs_of = [&](double t) {
        return log_mode ? std::pow(t * std::log(t), rep.m_alpha)
                        : std::pow(t, rep.m_alpha / 2.0);
    };
    auto rhs_of = [&](double t) { return alpha * std::pow(rep.c_bar, alpha) * t; };
    auto holds = [&](double t) { return lhs_of(t) >= rhs_of(t); };

    rep.grid.reserve(grid_points);
    const double ratio = std::log(t_hi / t_lo);
    for (int i = 0; i < grid_points; ++i) {
        const double t = t_lo * std::exp(ratio * i / double(grid_points - 1));
        rep.grid.push_back(t);
        rep.lhs.push_back(lhs_of(t));
        rep.rhs.push_back(rhs_of(t));
    }

    // Tail crossing: smallest index from which the inequality fails at
    // every later grid point.
    int first_bad = grid_points;
    for (int i = grid_points - 1; i >= 0; --i) {
        if (holds(rep.grid[i])) break;
        first_bad = i;
    }
    if (first_bad == grid_points) return rep;  // no crossing in range

    rep.crossed = true;
    if (first_bad == 0) {
        rep.failed_everywhere = true;
        rep.crossing_time = t_lo;
        return rep;
    }
    double lo = rep.grid[first_bad - 1];  // holds
    double hi = rep.grid[first_bad];      // fails
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
    }
    rep.crossing_time = 0.5 * (lo + hi);
    return rep;
}

}  // namespace gheat
