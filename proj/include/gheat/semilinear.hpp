#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gheat/operators.hpp"

namespace gheat {

/// Initial value problem u_t = Lu + u^{1+alpha}, u(0) = a >= 0.
struct ProblemSpec {
    Graph graph;
    double alpha = 1.0;
    Field initial;
    std::optional<int> base_vertex;  ///< defaults to argmax of initial, lowest index on ties
};

/// The distinguished vertex e: supplied, or argmax of the initial data.
inline int resolve_base_vertex(const ProblemSpec& spec) {
    if (spec.base_vertex) {
        require(*spec.base_vertex >= 0 && *spec.base_vertex < spec.graph.vertex_count(),
                errc::unknown_vertex, "base vertex out of range");
        return *spec.base_vertex;
    }
    int best = 0;
    for (int x = 1; x < spec.graph.vertex_count(); ++x)
        if (spec.initial[x] > spec.initial[best]) best = x;
    return best;
}

/// Validate the problem data. Identically-zero initial data is admitted
/// only where the zero equilibrium is a meaningful answer (integration,
/// sweeps); callers needing a(e) > 0 pass allow_zero = false.
inline void validate_problem(const ProblemSpec& spec, bool allow_zero) {
    require(std::isfinite(spec.alpha) && spec.alpha > 0.0, errc::invalid_parameter,
            "alpha must be positive");
    detail::check_field(spec.graph, spec.initial, "problem initial data");
    if (spec.base_vertex)
        require(*spec.base_vertex >= 0 && *spec.base_vertex < spec.graph.vertex_count(),
                errc::unknown_vertex, "base vertex out of range");
    double max_a = 0.0;
    for (Eigen::Index i = 0; i < spec.initial.size(); ++i) {
        require(std::isfinite(spec.initial[i]) && spec.initial[i] >= 0.0,
                errc::invalid_parameter, "initial data must be nonnegative and finite");
        max_a = std::max(max_a, spec.initial[i]);
    }
    if (!allow_zero) {
        require(max_a > 0.0, errc::invalid_parameter, "initial data must not be identically zero");
        require(spec.initial[resolve_base_vertex(spec)] > 0.0, errc::invalid_parameter,
                "initial data must be positive at the base vertex");
    }
}

/// Right-hand side Lu + u^{1+alpha}. Rejects negative states: the
/// reaction power is only defined for nonnegative u.
inline Field reaction_rhs(const Graph& g, const Field& u, double alpha) {
    detail::check_field(g, u, "reaction_rhs");
    require(std::isfinite(alpha) && alpha > 0.0, errc::invalid_parameter,
            "alpha must be positive");
    for (Eigen::Index i = 0; i < u.size(); ++i)
        require(u[i] >= 0.0, errc::invalid_parameter,
                "reaction_rhs requires nonnegative state");
    Field out = laplacian(g, u);
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] += std::pow(u[i], 1.0 + alpha);
    return out;
}

struct IntegrationControl {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double horizon = 1.0;
    double blow_up_threshold = 1e8;
    double min_step = 1e-12;
    double initial_step = 0.0;               ///< 0 selects a starting step automatically
    std::vector<double> sample_times;        ///< optional exact landing times in (0, horizon]
};

enum class TrajectoryStatus { completed_horizon, blew_up, step_underflow };

inline std::string_view to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::completed_horizon: return "completed_horizon";
        case TrajectoryStatus::blew_up: return "blew_up";
        case TrajectoryStatus::step_underflow: return "step_underflow";
    }
    return "unknown";
}

struct Trajectory {
    std::vector<double> times;   ///< strictly increasing, starting at 0
    std::vector<Field> states;   ///< nonnegative, one per time
    TrajectoryStatus status = TrajectoryStatus::completed_horizon;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();  ///< upper bracket end
    double blow_up_bracket = 0.0;                                    ///< bracket width
    std::vector<double> mass_series;      ///< integral of u d mu per time
    std::vector<double> reaction_series;  ///< integral of u^{1+alpha} d mu per time
    double alpha = 0.0;
};

namespace detail {

/// Dormand-Prince 5(4) embedded pair with FSAL.
struct Dopri5Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct StepResult {
    Field y_new;
    Field k_last;  ///< derivative at (t+h, y_new), reused as FSAL stage
    double error = 0.0;
    bool finite = true;
};

template <class Rhs>
StepResult dopri5_step(const Rhs& f, const Field& y, const Field& k1, double h, double abs_tol,
                       double rel_tol) {
    using T = Dopri5Tableau;
    const Field k2 = f(y + h * (T::a21 * k1));
    const Field k3 = f(y + h * (T::a31 * k1 + T::a32 * k2));
    const Field k4 = f(y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const Field k5 = f(y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const Field k6 =
        f(y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));

    StepResult r;
    r.y_new = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    r.k_last = f(r.y_new);
    const Field err_vec = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                               T::e7 * r.k_last);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(r.y_new[i])) {
            r.finite = false;
            break;
        }
        const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(r.y_new[i]));
        const double q = err_vec[i] / scale;
        acc += q * q;
    }
    r.error = r.finite ? std::sqrt(acc / static_cast<double>(y.size()))
                       : std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace detail

/**
 * Adaptive integration of u_t = Lu + u^{1+alpha} with an embedded
 * Runge-Kutta 5(4) pair (Dormand-Prince, FSAL) under PI step-size
 * control. Every accepted step is recorded; entries of sample_times are
 * landed on exactly.
 *
 * Blow-up: once an accepted state's sup-norm reaches blow_up_threshold,
 * the crossing is bracketed by bisection on the step from the last
 * sub-threshold state, and the trajectory ends at the bracket's upper
 * end (so the final state certifies the threshold crossing). The step
 * controller collapsing below min_step while the sup-norm grows is
 * treated the same way; collapsing without growth reports
 * step_underflow.
 *
 * Nonnegativity: candidate steps with entries below -abs_tol are
 * rejected and retried at half step; entries in [-abs_tol, 0) are
 * clamped to zero. Stage evaluations clamp the reaction power's
 * argument at zero so transient round-off negatives cannot produce NaN.
 */
inline Trajectory integrate_semilinear(const ProblemSpec& spec, const IntegrationControl& control) {
    validate_problem(spec, /*allow_zero=*/true);
    require(control.rel_tol > 0.0 && control.abs_tol > 0.0, errc::invalid_parameter,
            "tolerances must be positive");
    require(control.horizon > 0.0, errc::invalid_parameter, "horizon must be positive");
    require(control.blow_up_threshold > 0.0 && control.min_step > 0.0, errc::invalid_parameter,
            "blow_up_threshold and min_step must be positive");

    std::vector<double> samples = control.sample_times;
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    for (double s : samples)
        require(s > 0.0 && s <= control.horizon, errc::invalid_parameter,
                "sample times must lie in (0, horizon]");

    const Graph& g = spec.graph;
    const double alpha = spec.alpha;
    auto rhs = [&](const Field& u) {
        Field out = laplacian(g, u);
        for (Eigen::Index i = 0; i < u.size(); ++i)
            out[i] += std::pow(std::max(u[i], 0.0), 1.0 + alpha);
        return out;
    };

    Trajectory traj;
    traj.alpha = alpha;
    auto record = [&](double t, const Field& u) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.mass_series.push_back(integrate(g, u));
        Field pw(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i) pw[i] = std::pow(u[i], 1.0 + alpha);
        traj.reaction_series.push_back(integrate(g, pw));
    };

    double t = 0.0;
    Field y = spec.initial;
    record(t, y);
    Field k1 = rhs(y);

    // Starting step: balance the sizes of the state and its derivative.
    double h = control.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale = control.abs_tol + control.rel_tol * std::abs(y[i]);
            d0 += (y[i] / scale) * (y[i] / scale);
            d1 += (k1[i] / scale) * (k1[i] / scale);
        }
        d0 = std::sqrt(d0 / y.size());
        d1 = std::sqrt(d1 / y.size());
        h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, control.horizon);
    }

    std::size_t next_sample = 0;
    double err_prev = 1.0;
    constexpr double safety = 0.9;

    // Bisection on a single step from (t0, y0): largest advance keeping
    // the sup-norm below the threshold; returns the bracket and the
    // first state at or above it.
    auto bracket_blow_up = [&](double t0, const Field& y0, double h_fail, const Field& y_fail) {
        double lo = 0.0;        // offsets from t0
        double hi = h_fail;
        Field y_lo = y0;
        Field y_hi = y_fail;    // known to be at/above threshold (finite)
        for (int it = 0; it < 80 && hi - lo > 1e-9 * std::max(1.0, t0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto step = detail::dopri5_step(rhs, y_lo, rhs(y_lo), mid - lo,
                                                  control.abs_tol, control.rel_tol);
            if (!step.finite) {
                hi = mid;
                continue;
            }
            if (step.y_new.maxCoeff() >= control.blow_up_threshold) {
                hi = mid;
                y_hi = step.y_new;
            } else {
                lo = mid;
                y_lo = step.y_new;
            }
        }
        traj.status = TrajectoryStatus::blew_up;
        traj.blow_up_time = t0 + hi;
        traj.blow_up_bracket = hi - lo;
        Field final_state = y_hi.cwiseMax(0.0);
        record(t0 + hi, final_state);
    };

    while (t < control.horizon) {
        double target = control.horizon;
        if (next_sample < samples.size()) target = std::min(target, samples[next_sample]);
        if (t + h >= target) h = target - t;
        if (h < control.min_step && target - t > control.min_step) h = control.min_step;

        const auto step = detail::dopri5_step(rhs, y, k1, h, control.abs_tol, control.rel_tol);

        const bool negative_dip = step.finite && step.y_new.minCoeff() < -control.abs_tol;
        if (!step.finite || negative_dip || step.error > 1.0) {
            // Rejected. Nonfinite values and negative dips halve the
            // step outright; controlled errors shrink via the usual rule.
            double shrink = 0.5;
            if (step.finite && !negative_dip)
                shrink = std::max(0.2, std::min(1.0, safety * std::pow(step.error, -0.2)));
            const double h_new = h * shrink;
            if (h_new < control.min_step) {
                const bool growing =
                    traj.states.size() >= 2 &&
                    traj.states.back().maxCoeff() >
                        traj.states[traj.states.size() - 2].maxCoeff();
                if (growing && step.finite &&
                    step.y_new.maxCoeff() >= control.blow_up_threshold) {
                    bracket_blow_up(t, y, h, step.y_new);
                } else if (growing) {
                    traj.status = TrajectoryStatus::blew_up;
                    traj.blow_up_time = t + h;
                    traj.blow_up_bracket = h;
                } else {
                    traj.status = TrajectoryStatus::step_underflow;
                }
                return traj;
            }
            h = h_new;
            continue;
        }

        // Accepted.
        Field y_new = step.y_new;
        for (Eigen::Index i = 0; i < y_new.size(); ++i)
            if (y_new[i] < 0.0) y_new[i] = 0.0;  // entries in [-abs_tol, 0)

        if (y_new.maxCoeff() >= control.blow_up_threshold) {
            bracket_blow_up(t, y, h, y_new);
            return traj;
        }

        t += h;
        // Snap to the landing target so recorded times are exact.
        if (next_sample < samples.size() &&
            std::abs(t - samples[next_sample]) <= 1e-12 * std::max(1.0, samples[next_sample])) {
            t = samples[next_sample];
            ++next_sample;
        } else if (std::abs(t - control.horizon) <= 1e-12 * std::max(1.0, control.horizon)) {
            t = control.horizon;
        }
        y = std::move(y_new);
        k1 = step.k_last;
        record(t, y);

        const double err = std::max(step.error, 1e-10);
        double fac = safety * std::pow(err, -0.2) * std::pow(err_prev, 0.08);
        fac = std::max(0.2, std::min(5.0, fac));
        h *= fac;
        err_prev = err;
    }

    traj.status = TrajectoryStatus::completed_horizon;
    return traj;
}

enum class Verdict { blow_up, decay_on_horizon, undetermined };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::blow_up: return "blow_up";
        case Verdict::decay_on_horizon: return "decay_on_horizon";
        case Verdict::undetermined: return "undetermined";
    }
    return "unknown";
}

struct Classification {
    Verdict verdict = Verdict::undetermined;
    double horizon = 0.0;
    double initial_sup = 0.0;
    double final_sup = 0.0;
    double max_sup = 0.0;
    double initial_metric = 0.0;  ///< sup-norm, or spread when use_spread
    double final_metric = 0.0;
    double mass_growth_rate = 0.0;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();
    double blow_up_bracket = 0.0;
};

/**
 * Finite-horizon surrogate for the global/non-global dichotomy:
 * blew_up maps to blow_up; completed_horizon with the chosen metric
 * (sup-norm, or max-min spread) contracting by decay_factor maps to
 * decay_on_horizon; anything else is undetermined. On a finite graph
 * every nontrivial nonnegative solution blows up eventually, so the
 * horizon is always part of the statement.
 */
inline Classification classify_trajectory(const Trajectory& traj, double horizon,
                                          double decay_factor, bool use_spread = false) {
    require(!traj.times.empty(), errc::invalid_parameter, "empty trajectory");
    require(decay_factor > 0.0, errc::invalid_parameter, "decay factor must be positive");

    auto metric = [&](const Field& u) {
        return use_spread ? u.maxCoeff() - u.minCoeff() : u.cwiseAbs().maxCoeff();
    };
    Classification c;
    c.horizon = horizon;
    c.initial_sup = traj.states.front().cwiseAbs().maxCoeff();
    c.final_sup = traj.states.back().cwiseAbs().maxCoeff();
    for (const Field& u : traj.states) c.max_sup = std::max(c.max_sup, u.cwiseAbs().maxCoeff());
    c.initial_metric = metric(traj.states.front());
    c.final_metric = metric(traj.states.back());
    const double dt = traj.times.back() - traj.times.front();
    if (dt > 0.0)
        c.mass_growth_rate = (traj.mass_series.back() - traj.mass_series.front()) / dt;

    if (traj.status == TrajectoryStatus::blew_up) {
        c.verdict = Verdict::blow_up;
        c.blow_up_time = traj.blow_up_time;
        c.blow_up_bracket = traj.blow_up_bracket;
    } else if (traj.status == TrajectoryStatus::completed_horizon &&
               c.final_metric <= decay_factor * c.initial_metric) {
        c.verdict = Verdict::decay_on_horizon;
    } else {
        c.verdict = Verdict::undetermined;
    }
    return c;
}

/// One (alpha, scale) cell of a threshold sweep.
struct SweepRow {
    double m_fit = 0.0;
    double alpha = 0.0;
    double m_alpha = 0.0;
    double scale = 0.0;
    Verdict verdict = Verdict::undetermined;
    TrajectoryStatus status = TrajectoryStatus::completed_horizon;
    double measure = 0.0;  ///< blow-up time when blew_up, else final sup-norm
};

struct SweepFamily {
    Graph graph;
    Field base_initial;                 ///< scaled by each sweep scale
    std::vector<int> volume_centers;    ///< centers for the growth fit (empty: vertex 0)
    int volume_r_max = 2;
};

/**
 * Integrate the problem over the cross product alphas x scales and
 * classify each cell. The family's growth degree m is fitted once from
 * ball volumes, so each row carries m*alpha against the dichotomy
 * threshold. Zero scale rows are the zero equilibrium.
 */
inline std::vector<SweepRow> fujita_sweep(const SweepFamily& family,
                                          const std::vector<double>& alphas,
                                          const std::vector<double>& scales,
                                          const IntegrationControl& control,
                                          double decay_factor = 0.9) {
    require(!alphas.empty() && !scales.empty(), errc::invalid_parameter,
            "sweep needs nonempty alpha and scale lists");
    detail::check_field(family.graph, family.base_initial, "sweep base initial data");

    std::vector<int> centers = family.volume_centers.empty() ? std::vector<int>{0}
                                                             : family.volume_centers;
    const VolumeGrowthFit fit = fit_volume_growth(family.graph, centers, family.volume_r_max);

    std::vector<SweepRow> rows;
    rows.reserve(alphas.size() * scales.size());
    for (double alpha : alphas) {
        for (double scale : scales) {
            require(scale >= 0.0, errc::invalid_parameter, "sweep scales must be nonnegative");
            ProblemSpec spec{family.graph, alpha, Field(family.base_initial * scale),
                             std::nullopt};
            const Trajectory traj = integrate_semilinear(spec, control);
            const Classification cls =
                classify_trajectory(traj, control.horizon, decay_factor);
            SweepRow row;
            row.m_fit = fit.exponent;
            row.alpha = alpha;
            row.m_alpha = fit.exponent * alpha;
            row.scale = scale;
            row.verdict = cls.verdict;
            row.status = traj.status;
            row.measure = traj.status == TrajectoryStatus::blew_up ? traj.blow_up_time
                                                                   : cls.final_sup;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace gheat
