#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gheat/operators.hpp"

namespace gheat {

enum class CurvatureCondition { cde, cde_prime };

enum class CurvatureVerdict { no_violation_found, violated };

inline std::string_view to_string(CurvatureCondition c) {
    return c == CurvatureCondition::cde ? "CDE" : "CDE_PRIME";
}

inline std::string_view to_string(CurvatureVerdict v) {
    return v == CurvatureVerdict::violated ? "violated" : "no_violation_found";
}

namespace detail {

struct ResidualParts {
    double lhs = 0.0;
    double rhs = 0.0;
    double lap_f_x = 0.0;
};

/// Both sides of the curvature inequality at x. Touches only f restricted
/// to B(x,2), so callers may embed local candidates in a global field.
inline ResidualParts curvature_parts(const Graph& g, int x, const Field& f,
                                     CurvatureCondition cond, double n, double K) {
    auto lap_at = [&](int y) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(y)) acc += nb.weight * (f[nb.to] - f[y]);
        return acc / g.mu(y);
    };
    auto gamma_at = [&](int y) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(y)) {
            const double d = f[nb.to] - f[y];
            acc += nb.weight * d * d;
        }
        return acc / (2.0 * g.mu(y));
    };

    ResidualParts parts;
    parts.lap_f_x = lap_at(x);
    const double gamma_f_x = gamma_at(x);

    double lap_gamma = 0.0;      // (L Gamma f)(x)
    double gamma_f_lapf = 0.0;   // Gamma(f, Lf)(x)
    double gamma_f_quot = 0.0;   // Gamma(f, Gamma(f)/f)(x)
    const double quot_x = gamma_f_x / f[x];
    for (const Neighbor& nb : g.neighbors(x)) {
        const double gy = gamma_at(nb.to);
        const double df = f[nb.to] - f[x];
        lap_gamma += nb.weight * (gy - gamma_f_x);
        gamma_f_lapf += nb.weight * df * (lap_at(nb.to) - parts.lap_f_x);
        gamma_f_quot += nb.weight * df * (gy / f[nb.to] - quot_x);
    }
    lap_gamma /= g.mu(x);
    gamma_f_lapf /= 2.0 * g.mu(x);
    gamma_f_quot /= 2.0 * g.mu(x);

    const double gamma2_x = 0.5 * (lap_gamma - 2.0 * gamma_f_lapf);
    parts.lhs = gamma2_x - gamma_f_quot;

    if (cond == CurvatureCondition::cde) {
        parts.rhs = parts.lap_f_x * parts.lap_f_x / n + K * gamma_f_x;
    } else {
        double lap_log = 0.0;
        for (const Neighbor& nb : g.neighbors(x))
            lap_log += nb.weight * (std::log(f[nb.to]) - std::log(f[x]));
        lap_log /= g.mu(x);
        parts.rhs = f[x] * f[x] * lap_log * lap_log / n + K * gamma_f_x;
    }
    return parts;
}

/// Vertices within hop distance `radius` of x, sorted.
inline std::vector<int> ball_vertices(const Graph& g, int x, int radius) {
    const auto dist = g.distances_from(x);
    std::vector<int> ball;
    for (int y = 0; y < g.vertex_count(); ++y)
        if (dist[y] >= 0 && dist[y] <= radius) ball.push_back(y);
    return ball;
}

}  // namespace detail

/**
 * LHS - RHS of the pointwise curvature inequality at x:
 *
 *   CDE(x,n,K):   G2(f) - Gamma(f, Gamma(f)/f) >= (1/n)(Lf)^2        + K Gamma(f)
 *   CDE'(x,n,K):  G2(f) - Gamma(f, Gamma(f)/f) >= (1/n) f^2 (L log f)^2 + K Gamma(f)
 *
 * Preconditions are hard errors, not residuals: f must be positive on
 * B(x,2) for both conditions, and CDE additionally requires (Lf)(x) < 0.
 */
inline double curvature_residual(const Graph& g, int x, const Field& f, CurvatureCondition cond,
                                 double n, double K) {
    detail::check_field(g, f, "curvature_residual");
    require(n > 0.0 && std::isfinite(n), errc::invalid_parameter,
            "dimension parameter n must be positive");
    require(std::isfinite(K), errc::invalid_parameter, "curvature parameter K must be finite");
    for (int y : detail::ball_vertices(g, x, 2))
        require(std::isfinite(f[y]) && f[y] > 0.0, errc::invalid_parameter,
                "test function must be positive on B(x,2); offending vertex " +
                    std::to_string(y));
    const auto parts = detail::curvature_parts(g, x, f, cond, n, K);
    if (cond == CurvatureCondition::cde)
        require(parts.lap_f_x < 0.0, errc::invalid_parameter,
                "CDE residual requires (Lf)(x) < 0 at the evaluation vertex");
    return parts.lhs - parts.rhs;
}

struct CurvatureReport {
    CurvatureCondition condition = CurvatureCondition::cde_prime;
    double n = 0.0;
    double K = 0.0;
    int vertex = 0;
    CurvatureVerdict verdict = CurvatureVerdict::no_violation_found;
    std::optional<Field> witness;   ///< present iff verdict == violated
    double witness_residual = 0.0;  ///< residual of the best candidate examined
    long trials = 0;
    std::uint64_t seed = 0;
};

struct FalsifierOptions {
    double amplitude = 3.0;        ///< log f sampled uniformly in [-amplitude, amplitude]
    int descent_sweeps = 400;      ///< cap on coordinate-descent sweeps per vertex
    double tolerance_scale = 1e-9; ///< violation threshold: scale * (1 + |LHS| + |RHS|)
};

/**
 * Randomized search for a positive test function violating the curvature
 * condition at each vertex. Candidates are supported on B(x,2) (f == 1
 * elsewhere), which is exact: both sides of the inequality at x depend
 * only on that ball. The most negative sample is sharpened by
 * coordinate-wise multiplicative descent before the verdict. A negative
 * residual within round-off of zero is not a violation; the cutoff is
 * -tolerance_scale * (1 + |LHS| + |RHS|). Per-vertex random streams are
 * keyed by (seed, vertex), so reports are deterministic and independent
 * of evaluation order.
 *
 * Absence of a violation is evidence, not proof: the report means "no
 * violation found under this budget and seed".
 */
inline std::vector<CurvatureReport> falsify_curvature(const Graph& g, CurvatureCondition cond,
                                                      double n, double K, long budget,
                                                      std::uint64_t seed,
                                                      const FalsifierOptions& opts = {}) {
    require(budget >= 1, errc::invalid_parameter, "falsifier budget must be at least 1");
    require(n > 0.0 && std::isfinite(n), errc::invalid_parameter,
            "dimension parameter n must be positive");
    require(opts.amplitude > 0.0, errc::invalid_parameter, "sampling amplitude must be positive");

    const double f_lo = std::exp(-3.0 * opts.amplitude);
    const double f_hi = std::exp(3.0 * opts.amplitude);

    std::vector<CurvatureReport> reports;
    reports.reserve(g.vertex_count());
    Field f = Field::Ones(g.vertex_count());

    for (int x = 0; x < g.vertex_count(); ++x) {
        const auto stencil = detail::ball_vertices(g, x, 2);
        SplitRng rng(seed, static_cast<std::uint64_t>(x));

        CurvatureReport rep;
        rep.condition = cond;
        rep.n = n;
        rep.K = K;
        rep.vertex = x;
        rep.seed = seed;

        auto admissible = [&](const detail::ResidualParts& p) {
            return cond != CurvatureCondition::cde || p.lap_f_x < 0.0;
        };
        auto below_cutoff = [&](const detail::ResidualParts& p) {
            const double tol =
                opts.tolerance_scale * (1.0 + std::abs(p.lhs) + std::abs(p.rhs));
            return p.lhs - p.rhs < -tol;
        };

        bool have_candidate = false;
        double best_residual = 0.0;
        Field best_f;

        long trial = 0;
        while (trial < budget) {
            ++trial;
            for (int v : stencil) f[v] = std::exp(rng.uniform(-opts.amplitude, opts.amplitude));
            const auto p = detail::curvature_parts(g, x, f, cond, n, K);
            if (!admissible(p)) continue;
            const double r = p.lhs - p.rhs;
            if (!have_candidate || r < best_residual) {
                have_candidate = true;
                best_residual = r;
                best_f = f;
                if (below_cutoff(p)) break;  // confirmed; descent only sharpens it
            }
        }
        rep.trials = trial;

        if (have_candidate) {
            // Coordinate-wise multiplicative descent from the best sample,
            // annealing the step factor as progress stalls.
            f = best_f;
            double step = 1.5;
            for (int sweep = 0; sweep < opts.descent_sweeps && step > 1.0 + 1e-12; ++sweep) {
                bool improved = false;
                for (int v : stencil) {
                    for (double factor : {step, 1.0 / step}) {
                        const double old = f[v];
                        const double moved = old * factor;
                        if (moved < f_lo || moved > f_hi) continue;
                        f[v] = moved;
                        const auto p = detail::curvature_parts(g, x, f, cond, n, K);
                        if (admissible(p) && p.lhs - p.rhs < best_residual) {
                            best_residual = p.lhs - p.rhs;
                            improved = true;
                            break;
                        }
                        f[v] = old;
                    }
                }
                if (!improved) step = 1.0 + (step - 1.0) * 0.5;
            }
            best_f = f;

            const auto p = detail::curvature_parts(g, x, best_f, cond, n, K);
            rep.witness_residual = p.lhs - p.rhs;
            if (below_cutoff(p)) {
                rep.verdict = CurvatureVerdict::violated;
                rep.witness = best_f;
            }
        }

        // Restore the shared work field for the next vertex.
        for (int v : stencil) f[v] = 1.0;
        reports.push_back(std::move(rep));
    }
    return reports;
}

/// Structured text rendering of falsifier output, one block per vertex.
inline std::string format_curvature_reports(const std::vector<CurvatureReport>& reports) {
    std::string out;
    for (const CurvatureReport& r : reports) {
        out += "vertex " + std::to_string(r.vertex) + ": " + std::string(to_string(r.condition)) +
               "(n=" + format_double(r.n) + ", K=" + format_double(r.K) + ") " +
               std::string(to_string(r.verdict)) + " residual=" +
               format_double(r.witness_residual) + " trials=" + std::to_string(r.trials) +
               " seed=" + std::to_string(r.seed) + "\n";
        if (r.witness) {
            out += "  witness = [";
            for (Eigen::Index i = 0; i < r.witness->size(); ++i) {
                if (i) out += ", ";
                out += format_double((*r.witness)[i]);
            }
            out += "]\n";
        }
    }
    return out;
}

}  // namespace gheat
