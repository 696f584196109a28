#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gheat/fujita.hpp"
#include "gheat/heat_kernel.hpp"
#include "gheat/semilinear.hpp"

namespace gheat {

enum class Quadrature { trapezoid, midpoint };

/// Discretization of the Duhamel integral: nodes 0 = t_0 < ... < t_N = T.
struct TimeGrid {
    std::vector<double> nodes;
    Quadrature quadrature = Quadrature::trapezoid;

    void validate() const {
        require(nodes.size() >= 3, errc::invalid_parameter,
                "time grid needs at least two intervals");
        require(nodes.front() == 0.0, errc::invalid_parameter, "time grid must start at 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            require(nodes[i] > nodes[i - 1], errc::invalid_parameter,
                    "time grid nodes must be strictly increasing");
    }

    double horizon() const { return nodes.back(); }
    int intervals() const { return static_cast<int>(nodes.size()) - 1; }

    bool is_uniform() const {
        const double h = nodes[1] - nodes[0];
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (std::abs((nodes[i] - nodes[i - 1]) - h) > 1e-12 * h) return false;
        return true;
    }

    static TimeGrid uniform(double horizon, int intervals,
                            Quadrature q = Quadrature::trapezoid) {
        require(horizon > 0.0, errc::invalid_parameter, "grid horizon must be positive");
        require(intervals >= 2, errc::invalid_parameter, "grid needs at least two intervals");
        TimeGrid grid;
        grid.quadrature = q;
        grid.nodes.resize(intervals + 1);
        for (int i = 0; i <= intervals; ++i)
            grid.nodes[i] = horizon * static_cast<double>(i) / intervals;
        grid.nodes.back() = horizon;
        return grid;
    }

    /// Geometrically growing spacing, useful for long horizons:
    /// t_i = T (q^i - 1)/(q^N - 1).
    static TimeGrid geometric(double horizon, int intervals, double growth,
                              Quadrature q = Quadrature::trapezoid) {
        require(horizon > 0.0, errc::invalid_parameter, "grid horizon must be positive");
        require(intervals >= 2, errc::invalid_parameter, "grid needs at least two intervals");
        require(growth > 1.0, errc::invalid_parameter, "geometric growth factor must exceed 1");
        TimeGrid grid;
        grid.quadrature = q;
        grid.nodes.resize(intervals + 1);
        const double denom = std::pow(growth, intervals) - 1.0;
        for (int i = 0; i <= intervals; ++i)
            grid.nodes[i] = horizon * (std::pow(growth, i) - 1.0) / denom;
        grid.nodes.back() = horizon;
        return grid;
    }
};

/// A grid function together with the weight data defining its norm
/// |v| = max over nodes and vertices of v / rho, rho(t,x) = p(t+gamma,e,x).
struct PicardState {
    TimeGrid grid;
    std::vector<Field> iterate;  ///< one nonnegative Field per node
    double gamma = 1.0;
    int base_vertex = 0;
    double norm_value = 0.0;
};

namespace detail {

/// rho(t_i, x) = p(t_i + gamma, e, x) for every node.
inline std::vector<Field> weight_fields(const HeatKernelOperator& hk, const TimeGrid& grid,
                                        double gamma, int e) {
    require(gamma > 0.0, errc::invalid_parameter, "gamma must be positive");
    require(e >= 0 && e < hk.graph().vertex_count(), errc::unknown_vertex,
            "base vertex out of range");
    const Eigen::MatrixXd& psi = hk.modes();
    std::vector<Field> rho(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const Eigen::VectorXd w =
            ((hk.eigenvalues().array() * (grid.nodes[i] + gamma)).exp() *
             psi.row(e).transpose().array())
                .matrix();
        rho[i] = psi * w;
    }
    return rho;
}

inline double norm_against(const std::vector<Field>& values, const std::vector<Field>& rho) {
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        best = std::max(best, (values[i].array().abs() / rho[i].array()).maxCoeff());
    return best;
}

}  // namespace detail

/// Grid-restricted weighted sup-norm of a state.
inline double weighted_norm(const HeatKernelOperator& hk, const PicardState& state) {
    state.grid.validate();
    const auto rho = detail::weight_fields(hk, state.grid, state.gamma, state.base_vertex);
    return detail::norm_against(state.iterate, rho);
}

/// u_0(t_i) = P_{t_i} a: the linear flow sampled on the grid.
inline PicardState linear_baseline(const HeatKernelOperator& hk, const Field& a,
                                   const TimeGrid& grid, double gamma,
                                   std::optional<int> base_vertex = std::nullopt) {
    grid.validate();
    const Graph& g = hk.graph();
    detail::check_field(g, a, "linear_baseline");
    for (Eigen::Index i = 0; i < a.size(); ++i)
        require(std::isfinite(a[i]) && a[i] >= 0.0, errc::invalid_parameter,
                "initial data must be nonnegative and finite");

    PicardState state;
    state.grid = grid;
    state.gamma = gamma;
    if (base_vertex) {
        require(*base_vertex >= 0 && *base_vertex < g.vertex_count(), errc::unknown_vertex,
                "base vertex out of range");
        state.base_vertex = *base_vertex;
    } else {
        int best = 0;
        for (int x = 1; x < g.vertex_count(); ++x)
            if (a[x] > a[best]) best = x;
        state.base_vertex = best;
    }

    state.iterate.resize(grid.nodes.size());
    state.iterate[0] = a;
    for (std::size_t i = 1; i < grid.nodes.size(); ++i)
        state.iterate[i] = hk.apply(grid.nodes[i], a).cwiseMax(0.0);
    state.norm_value = weighted_norm(hk, state);
    return state;
}

namespace detail {

/**
 * The Duhamel operator on the grid:
 *
 *   (Phi u)(t_i, x) = integral over [0, t_i] of
 *                     sum_y mu(y) p(t_i - s, x, y) u(s, y)^{1+alpha} ds.
 *
 * Work happens in eigencoordinates: with vt_j = psi^T (mu . u_j^{1+alpha})
 * each target node accumulates sum_j w_j e^{lambda (t_i - t_j)} vt_j and
 * transforms back once. Trapezoid handles the s = t_i endpoint by the
 * identity limit p(0+,x,y) = delta_xy / mu(y), i.e. the endpoint weight
 * multiplies u(t_i,x)^{1+alpha} directly; midpoint evaluates interval
 * midpoints with the node average of u^{1+alpha} and never touches the
 * endpoint.
 */
inline std::vector<Field> apply_phi_fields(const HeatKernelOperator& hk, const TimeGrid& grid,
                                           const std::vector<Field>& u, double alpha) {
    const Graph& g = hk.graph();
    const int n = g.vertex_count();
    const std::size_t count = grid.nodes.size();
    const Eigen::MatrixXd& psi = hk.modes();
    const Eigen::ArrayXd lambda = hk.eigenvalues().array();

    Eigen::ArrayXd mu(n);
    for (int x = 0; x < n; ++x) mu[x] = g.mu(x);

    // Powers and their eigen-coefficients at every node.
    std::vector<Field> pw(count);
    Eigen::MatrixXd coeff(n, count);
    for (std::size_t j = 0; j < count; ++j) {
        pw[j] = u[j].array().max(0.0).pow(1.0 + alpha).matrix();
        coeff.col(j) = psi.transpose() * (pw[j].array() * mu).matrix();
    }

    std::vector<Field> out(count);
    out[0] = Field::Zero(n);
    for (std::size_t i = 1; i < count; ++i) {
        const double ti = grid.nodes[i];
        Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(n);
        if (grid.quadrature == Quadrature::trapezoid) {
            for (std::size_t j = 0; j < i; ++j) {
                const double left = j == 0 ? 0.0 : grid.nodes[j - 1];
                const double w = 0.5 * ((j == 0 ? grid.nodes[1]
                                                : std::min(grid.nodes[j + 1], ti)) -
                                        left);
                acc += w * (lambda * (ti - grid.nodes[j])).exp() * coeff.col(j).array();
            }
            out[i] = (psi * acc.matrix());
            const double w_end = 0.5 * (ti - grid.nodes[i - 1]);
            out[i] += w_end * pw[i];
        } else {
            for (std::size_t j = 0; j < i; ++j) {
                const double width = grid.nodes[j + 1] - grid.nodes[j];
                const double mid = 0.5 * (grid.nodes[j] + grid.nodes[j + 1]);
                acc += 0.5 * width * (lambda * (ti - mid)).exp() *
                       (coeff.col(j) + coeff.col(j + 1)).array();
            }
            out[i] = (psi * acc.matrix());
        }
        out[i] = out[i].cwiseMax(0.0);
    }
    return out;
}

}  // namespace detail

/// Phi applied to a state; the result reuses the state's grid and norm data.
inline PicardState apply_phi(const HeatKernelOperator& hk, const PicardState& state,
                             double alpha) {
    state.grid.validate();
    require(std::isfinite(alpha) && alpha > 0.0, errc::invalid_parameter,
            "alpha must be positive");
    require(state.iterate.size() == state.grid.nodes.size(), errc::dimension_mismatch,
            "state has " + std::to_string(state.iterate.size()) + " fields for " +
                std::to_string(state.grid.nodes.size()) + " grid nodes");
    for (const Field& f : state.iterate)
        detail::check_field(hk.graph(), f, "apply_phi state");

    PicardState out = state;
    out.iterate = detail::apply_phi_fields(hk, state.grid, state.iterate, alpha);
    out.norm_value = weighted_norm(hk, out);
    return out;
}

/// Analytic smallness constant of the Duhamel operator,
/// (-2 gamma / (2 - m alpha)) (C1/c1)^alpha gamma^{-m alpha / 2},
/// defined only in the supercritical regime m*alpha > 2.
inline double c_tilde(double gamma, double alpha, double m, double ratio_c1_over_c1) {
    require(gamma > 0.0, errc::invalid_parameter, "gamma must be positive");
    require(alpha > 0.0 && m > 0.0, errc::invalid_parameter, "alpha and m must be positive");
    require(ratio_c1_over_c1 > 0.0, errc::invalid_parameter,
            "volume-constant ratio must be positive");
    require(m * alpha > 2.0, errc::invalid_parameter,
            "smallness constant requires m*alpha > 2, got " + format_double(m * alpha));
    return (-2.0 * gamma / (2.0 - m * alpha)) * std::pow(ratio_c1_over_c1, alpha) *
           std::pow(gamma, -m * alpha / 2.0);
}

/// Empirical grid flavor of the constant: the norm of Phi applied to the
/// weight function rho itself. Sharper than the analytic formula on a
/// concrete finite graph, and defined for any exponent.
inline double c_tilde_grid(const HeatKernelOperator& hk, const TimeGrid& grid, double gamma,
                           int base_vertex, double alpha) {
    grid.validate();
    PicardState rho_state;
    rho_state.grid = grid;
    rho_state.gamma = gamma;
    rho_state.base_vertex = base_vertex;
    rho_state.iterate = detail::weight_fields(hk, grid, gamma, base_vertex);
    rho_state.norm_value = 1.0;  // |rho| = 1 by construction
    return apply_phi(hk, rho_state, alpha).norm_value;
}

/// Membership in the admissible-delta set: 0 < delta < 1,
/// delta^{a/2} (1 + delta^{a/4})^{1+a} < delta^{a/4}, and
/// c_tilde * delta^{a/2} < 1.
inline bool delta_admissible(double delta, double alpha, double c_tilde_value) {
    if (!(delta > 0.0 && delta < 1.0)) return false;
    if (!(alpha > 0.0) || !(c_tilde_value > 0.0)) return false;
    const double d2 = std::pow(delta, alpha / 2.0);
    const double d4 = std::pow(delta, alpha / 4.0);
    if (!(d2 * std::pow(1.0 + d4, 1.0 + alpha) < d4)) return false;
    return c_tilde_value * d2 < 1.0;
}

struct PicardResult {
    PicardState initial;  ///< u_0, the linear baseline
    PicardState solution; ///< final iterate
    std::vector<double> iterate_norms;          ///< |u_n| for every iterate
    std::vector<double> successive_diff_norms;  ///< |u_{n+1} - u_n|
    double kappa_empirical = 0.0;  ///< max ratio of successive diff norms
    double kappa_analytic = 0.0;   ///< c_tilde_grid (1+alpha) M^alpha
    double c_tilde_grid_value = 0.0;
    double m_norm = 0.0;           ///< running max of iterate norms
    double delta = 0.0;            ///< |u_0|
    double fixed_point_residual = 0.0;  ///< |u - u_0 - Phi u|
    bool envelope_ok = false;      ///< 0 <= u <= M rho at all grid points
    bool converged = false;
    int iterations = 0;
};

/**
 * Fixed-point iteration u_{n+1} = u_0 + Phi u_n for the mild form of
 * u_t = Lu + u^{1+alpha}, in the rho-weighted grid norm. Stops when the
 * successive difference drops below tol; five consecutive growths of the
 * difference norm (or a non-finite norm) abort with a divergence error
 * carrying the norm history. kappa_analytic pairs the empirical grid
 * constant with M = the running max iterate norm, so the contraction
 * condition kappa < 1 is auditable from the result.
 */
inline PicardResult picard_solve(const HeatKernelOperator& hk, const Field& a, double alpha,
                                 double gamma, const TimeGrid& grid, int max_iter = 60,
                                 double tol = 1e-12,
                                 std::optional<int> base_vertex = std::nullopt) {
    require(max_iter >= 1, errc::invalid_parameter, "max_iter must be at least 1");
    require(tol > 0.0, errc::invalid_parameter, "tolerance must be positive");

    PicardResult res;
    res.initial = linear_baseline(hk, a, grid, gamma, base_vertex);
    res.delta = res.initial.norm_value;
    res.m_norm = res.initial.norm_value;
    res.iterate_norms.push_back(res.initial.norm_value);

    const auto rho = detail::weight_fields(hk, grid, res.initial.gamma,
                                           res.initial.base_vertex);
    auto diff_norm = [&](const std::vector<Field>& u, const std::vector<Field>& v) {
        double best = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            best = std::max(best,
                            ((u[i] - v[i]).array().abs() / rho[i].array()).maxCoeff());
        return best;
    };

    PicardState u = res.initial;
    int growth_streak = 0;
    for (int n = 1; n <= max_iter; ++n) {
        PicardState phi_u = apply_phi(hk, u, alpha);
        PicardState next = u;
        for (std::size_t i = 0; i < next.iterate.size(); ++i)
            next.iterate[i] = res.initial.iterate[i] + phi_u.iterate[i];
        next.norm_value = detail::norm_against(next.iterate, rho);

        const double diff = diff_norm(next.iterate, u.iterate);
        res.successive_diff_norms.push_back(diff);
        res.iterate_norms.push_back(next.norm_value);
        res.m_norm = std::max(res.m_norm, next.norm_value);
        res.iterations = n;

        const bool grew = !std::isfinite(diff) ||
                          (res.successive_diff_norms.size() >= 2 &&
                           diff > *(res.successive_diff_norms.end() - 2));
        growth_streak = grew ? growth_streak + 1 : 0;
        if (!std::isfinite(diff) || !std::isfinite(next.norm_value) || growth_streak >= 5) {
            std::string history;
            for (double d : res.successive_diff_norms) history += " " + format_double(d);
            fail(errc::divergence,
                 "iteration diverged after " + std::to_string(n) +
                     " steps; successive difference norms:" + history);
        }

        u = std::move(next);
        if (diff <= tol) {
            res.converged = true;
            break;
        }
    }

    res.solution = u;
    for (std::size_t k = 1; k < res.successive_diff_norms.size(); ++k) {
        const double prev = res.successive_diff_norms[k - 1];
        if (prev > 0.0)
            res.kappa_empirical =
                std::max(res.kappa_empirical, res.successive_diff_norms[k] / prev);
    }

    res.c_tilde_grid_value =
        c_tilde_grid(hk, grid, res.initial.gamma, res.initial.base_vertex, alpha);
    res.kappa_analytic =
        res.c_tilde_grid_value * (1.0 + alpha) * std::pow(res.m_norm, alpha);

    {
        PicardState phi_u = apply_phi(hk, res.solution, alpha);
        double worst = 0.0;
        for (std::size_t i = 0; i < res.solution.iterate.size(); ++i)
            worst = std::max(
                worst, ((res.solution.iterate[i] - res.initial.iterate[i] - phi_u.iterate[i])
                            .array()
                            .abs() /
                        rho[i].array())
                           .maxCoeff());
        res.fixed_point_residual = worst;
    }

    res.envelope_ok = true;
    for (std::size_t i = 0; i < res.solution.iterate.size() && res.envelope_ok; ++i) {
        const Field& f = res.solution.iterate[i];
        for (Eigen::Index x = 0; x < f.size(); ++x) {
            if (f[x] < 0.0 ||
                f[x] > res.m_norm * rho[i][x] * (1.0 + 1e-10) + 1e-300) {
                res.envelope_ok = false;
                break;
            }
        }
    }
    return res;
}

/// Max pointwise gap between a converged grid solution and an ODE
/// trajectory recorded at (at least) the grid's nodes.
inline double crosscheck_with_integrator(const PicardState& state, const Trajectory& traj) {
    state.grid.validate();
    require(!traj.times.empty(), errc::invalid_parameter, "empty trajectory");
    require(traj.states.front().size() == state.iterate.front().size(),
            errc::dimension_mismatch, "trajectory and state are on different graphs");

    double gap = 0.0;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < state.grid.nodes.size(); ++i) {
        const double t = state.grid.nodes[i];
        while (cursor < traj.times.size() &&
               traj.times[cursor] < t - 1e-9 * std::max(1.0, t))
            ++cursor;
        require(cursor < traj.times.size() &&
                    std::abs(traj.times[cursor] - t) <= 1e-9 * std::max(1.0, t),
                errc::invalid_parameter,
                "trajectory does not contain grid node t = " + format_double(t) +
                    "; integrate with matching sample times");
        gap = std::max(gap,
                       (state.iterate[i] - traj.states[cursor]).cwiseAbs().maxCoeff());
    }
    return gap;
}

/// Structured text rendering of a fixed-point run.
inline std::string format_picard_result(const PicardResult& res) {
    std::string out;
    out += "converged: " + std::string(res.converged ? "true" : "false") + " after " +
           std::to_string(res.iterations) + " iterations\n";
    out += "delta (baseline norm): " + format_double(res.delta) + "\n";
    out += "M (max iterate norm): " + format_double(res.m_norm) + "\n";
    out += "c_tilde (grid): " + format_double(res.c_tilde_grid_value) + "\n";
    out += "kappa_empirical: " + format_double(res.kappa_empirical) + "\n";
    out += "kappa_analytic: " + format_double(res.kappa_analytic) + "\n";
    out += "fixed_point_residual: " + format_double(res.fixed_point_residual) + "\n";
    out += "envelope_ok: " + std::string(res.envelope_ok ? "true" : "false") + "\n";
    out += "iterate_norms:";
    for (double v : res.iterate_norms) out += " " + format_double(v);
    out += "\nsuccessive_diff_norms:";
    for (double v : res.successive_diff_norms) out += " " + format_double(v);
    out += "\n";
    return out;
}

}  // namespace gheat
