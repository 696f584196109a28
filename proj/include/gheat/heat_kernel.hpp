#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "gheat/operators.hpp"

namespace gheat {

/**
 * Heat kernel and semigroup of the weighted Laplacian via dense
 * spectral decomposition.
 *
 * The generator is symmetrized as S = M^{-1/2} (W - diag m) M^{-1/2}
 * with M = diag mu, which is similar to L and symmetric, so a
 * self-adjoint eigensolver applies. With psi = M^{-1/2} Phi the kernel
 * is p(t,x,y) = sum_k e^{lambda_k t} psi_k(x) psi_k(y), and
 * P_t f = psi * (e^{lambda t} . (psi^T (mu . f))).
 *
 * Eigenvalues are stored descending; connectivity forces a simple top
 * eigenvalue which is snapped to exactly 0 so constants are preserved
 * to the last bit. Dense decomposition is the single backend, with a
 * configurable size cap (default 4096).
 */
class HeatKernelOperator {
public:
    static constexpr int default_size_cap = 4096;

    explicit HeatKernelOperator(const Graph& g, int size_cap = default_size_cap) : graph_(g) {
        const int n = g.vertex_count();
        require(n <= size_cap, errc::size_over_cap,
                "graph has " + std::to_string(n) + " vertices, dense eigensolver cap is " +
                    std::to_string(size_cap));

        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        std::vector<double> root(n);
        for (int x = 0; x < n; ++x) root[x] = std::sqrt(g.mu(x));
        for (int x = 0; x < n; ++x) {
            s(x, x) = -g.weight_sum(x) / g.mu(x);
            for (const Neighbor& nb : g.neighbors(x))
                s(x, nb.to) = nb.weight / (root[x] * root[nb.to]);
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
        require(solver.info() == Eigen::Success, errc::eigensolver_failure,
                "self-adjoint eigensolver did not converge");

        // Solver returns ascending order; flip to descending so index 0
        // is the stationary mode.
        eigenvalues_ = solver.eigenvalues().reverse();
        psi_ = solver.eigenvectors().rowwise().reverse();

        const double scale = std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
        require(std::abs(eigenvalues_[0]) <= 1e-8 * scale, errc::eigensolver_failure,
                "top eigenvalue " + format_double(eigenvalues_[0]) + " is not numerically zero");
        if (n > 1)
            require(eigenvalues_[1] < 0.0, errc::eigensolver_failure,
                    "zero eigenvalue is not simple; graph should be connected");
        eigenvalues_[0] = 0.0;

        sqrt_mu_.resize(n);
        for (int x = 0; x < n; ++x) sqrt_mu_[x] = root[x];
        psi_.array().colwise() /= sqrt_mu_.array();  // psi = M^{-1/2} Phi
        d_mu_ = g.structural_constants().d_mu;
    }

    const Graph& graph() const { return graph_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    /// Columns are psi_k = M^{-1/2} phi_k (phi_k orthonormal).
    const Eigen::MatrixXd& modes() const { return psi_; }
    double d_mu() const { return d_mu_; }

    double value(double t, int x, int y) const {
        check_time(t);
        require(x >= 0 && x < graph_.vertex_count() && y >= 0 && y < graph_.vertex_count(),
                errc::unknown_vertex, "kernel vertex index out of range");
        double acc = 0.0;
        for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k)
            acc += std::exp(eigenvalues_[k] * t) * psi_(x, k) * psi_(y, k);
        return acc;
    }

    /// p(t,x,x) for every x at once.
    Eigen::VectorXd diagonal(double t) const {
        check_time(t);
        return (psi_.array().square().matrix() * (eigenvalues_.array() * t).exp().matrix());
    }

    Eigen::MatrixXd kernel_matrix(double t) const {
        check_time(t);
        const Eigen::VectorXd w = (eigenvalues_.array() * t).exp();
        return psi_ * w.asDiagonal() * psi_.transpose();
    }

    /// P_t f by the spectral formula; exact conservation of constants.
    Field apply(double t, const Field& f) const {
        check_time(t);
        detail::check_field(graph_, f, "apply_semigroup");
        Eigen::VectorXd coeff = psi_.transpose() * (f.array() * mu_array()).matrix();
        coeff.array() *= (eigenvalues_.array() * t).exp();
        return psi_ * coeff;
    }

private:
    static void check_time(double t) {
        require(std::isfinite(t) && t > 0.0, errc::invalid_parameter,
                "kernel time must be positive, got " + format_double(t));
    }

    Eigen::ArrayXd mu_array() const { return sqrt_mu_.array().square(); }

    Graph graph_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd psi_;
    Eigen::VectorXd sqrt_mu_;
    double d_mu_ = 0.0;
};

inline HeatKernelOperator spectral_decompose(const Graph& g,
                                             int size_cap = HeatKernelOperator::default_size_cap) {
    return HeatKernelOperator(g, size_cap);
}

inline double kernel_value(const HeatKernelOperator& hk, double t, int x, int y) {
    return hk.value(t, x, y);
}

inline Field apply_semigroup(const HeatKernelOperator& hk, double t, const Field& f) {
    return hk.apply(t, f);
}

struct SeriesMethod {
    int order = 40;            ///< truncation order N of the exponential series
    double tolerance = 1e-10;  ///< required remainder bound
};

/**
 * P_t f by the truncated exponential series sum_{k<=N} t^k L^k f / k!.
 * The operator norm bound |L| <= 2 D_mu gives the remainder estimate
 * R_N <= |f|_inf e^{2 D_mu t} (2 D_mu t)^{N+1} / (N+1)!; if that bound
 * exceeds the requested tolerance the call fails rather than returning
 * a silently inaccurate value.
 */
inline Field apply_semigroup(const HeatKernelOperator& hk, double t, const Field& f,
                             SeriesMethod method) {
    require(std::isfinite(t) && t > 0.0, errc::invalid_parameter,
            "semigroup time must be positive");
    require(method.order >= 1, errc::invalid_parameter, "series order must be at least 1");
    detail::check_field(hk.graph(), f, "apply_semigroup");

    const double rate = 2.0 * hk.d_mu() * t;
    const double amplitude = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    double tail = amplitude * std::exp(rate);
    for (int k = 1; k <= method.order + 1; ++k) tail *= rate / k;
    if (!(tail <= method.tolerance))
        fail(errc::truncation_insufficient,
             "series remainder bound " + format_double(tail) + " exceeds tolerance " +
                 format_double(method.tolerance) + " at order " + std::to_string(method.order));

    Field sum = f;
    Field term = f;
    for (int k = 1; k <= method.order; ++k) {
        term = laplacian(hk.graph(), term) * (t / k);
        sum += term;
    }
    return sum;
}

struct KernelAxiomReport {
    double max_symmetry_error = 0.0;
    double min_kernel_value = 0.0;
    double max_conservation_defect = 0.0;
    double max_semigroup_defect = 0.0;
    double max_heat_equation_residual = 0.0;  ///< relative, central difference in t
    std::vector<double> times;
};

/**
 * Exhaustive check of the kernel axioms over all vertex pairs at the
 * given times: symmetry, positivity, conservation (equality on finite
 * graphs), the heat equation d/dt p = L_x p via central differences
 * (h = 1e-5, relative residual), and the semigroup identity
 * sum_z mu(z) p(t,x,z) p(s,z,y) = p(t+s,x,y) over consecutive time
 * pairs (a single time is paired with itself).
 */
inline KernelAxiomReport verify_kernel_axioms(const HeatKernelOperator& hk,
                                              const std::vector<double>& times) {
    require(!times.empty(), errc::invalid_parameter, "axiom check needs at least one time");
    for (double t : times)
        require(std::isfinite(t) && t > 0.0, errc::invalid_parameter,
                "axiom check times must be positive");

    const Graph& g = hk.graph();
    const int n = g.vertex_count();
    KernelAxiomReport rep;
    rep.times = times;
    rep.min_kernel_value = std::numeric_limits<double>::infinity();

    auto laplacian_columns = [&](const Eigen::MatrixXd& p) {
        Eigen::MatrixXd out(n, n);
        for (int x = 0; x < n; ++x) {
            Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);
            for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * (p.row(nb.to) - p.row(x));
            out.row(x) = acc / g.mu(x);
        }
        return out;
    };

    for (double t : times) {
        const Eigen::MatrixXd p = hk.kernel_matrix(t);
        rep.max_symmetry_error =
            std::max(rep.max_symmetry_error, (p - p.transpose()).cwiseAbs().maxCoeff());
        rep.min_kernel_value = std::min(rep.min_kernel_value, p.minCoeff());
        for (int x = 0; x < n; ++x) {
            double mass = 0.0;
            for (int y = 0; y < n; ++y) mass += g.mu(y) * p(x, y);
            rep.max_conservation_defect =
                std::max(rep.max_conservation_defect, std::abs(mass - 1.0));
        }

        const double h = std::min(1e-5, t / 2.0);
        const Eigen::MatrixXd fd = (hk.kernel_matrix(t + h) - hk.kernel_matrix(t - h)) / (2.0 * h);
        const Eigen::MatrixXd lap = laplacian_columns(p);
        const Eigen::ArrayXXd rel =
            (fd - lap).array().abs() / (1.0 + lap.array().abs());
        rep.max_heat_equation_residual = std::max(rep.max_heat_equation_residual, rel.maxCoeff());
    }

    const std::size_t pairs = times.size() == 1 ? 1 : times.size() - 1;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double t = times[i];
        const double s = times[std::min(i + 1, times.size() - 1)];
        Eigen::VectorXd mu(n);
        for (int x = 0; x < n; ++x) mu[x] = g.mu(x);
        const Eigen::MatrixXd lhs = hk.kernel_matrix(t) * mu.asDiagonal() * hk.kernel_matrix(s);
        const Eigen::MatrixXd rhs = hk.kernel_matrix(t + s);
        rep.max_semigroup_defect =
            std::max(rep.max_semigroup_defect, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return rep;
}

enum class BoundId { diagonal_upper, gaussian_lower, ondiag_lower, volume_lower };

inline std::string_view to_string(BoundId id) {
    switch (id) {
        case BoundId::diagonal_upper: return "diagonal_upper";
        case BoundId::gaussian_lower: return "gaussian_lower";
        case BoundId::ondiag_lower: return "ondiagonal_lower";
        case BoundId::volume_lower: return "volume_lower";
    }
    return "unknown";
}

/// One bound to check: which inequality, where, and with what constants.
struct BoundRequest {
    BoundId id = BoundId::diagonal_upper;
    std::vector<double> times;  ///< sample times (see each bound for its role)
    std::vector<int> centers;   ///< sample vertices x; empty means all
    bool diagonal_only = true;  ///< restrict to y == x (upper/gaussian bounds)

    double c2 = 0.0, c3 = 0.0, n_exp = 0.0;  ///< gaussian lower constants
    double c = 0.0;                          ///< on-diagonal lower constant
    double c0 = 0.0;                         ///< volume lower constant, must exceed 2 D_mu e

    /// When modeling an infinite lattice by a torus of side L, samples
    /// with kernel time beyond (L/6)^2 are clipped (wrap contamination).
    std::optional<double> wrap_length;
    bool collect_samples = false;
};

struct BoundSample {
    double t = 0.0;
    int x = 0, y = 0;
    double kernel = 0.0;
    double reference = 0.0;  ///< the bound's other side at this sample
};

struct BoundCheckReport {
    BoundId id = BoundId::diagonal_upper;
    bool holds = true;
    double fitted_c1 = 0.0;  ///< diagonal_upper only: max p(t,x,y) V(x, sqrt t)
    double worst_ratio = 0.0;
    double worst_t = 0.0;
    int worst_x = 0, worst_y = 0;
    double t_min = 0.0, t_max = 0.0;
    bool clipped = false;
    std::vector<BoundSample> samples;
};

inline BoundCheckReport verify_bound(const HeatKernelOperator& hk, const BoundRequest& req) {
    const Graph& g = hk.graph();
    require(!req.times.empty(), errc::invalid_parameter, "bound check needs sample times");

    std::vector<int> centers = req.centers;
    if (centers.empty()) {
        centers.resize(g.vertex_count());
        for (int x = 0; x < g.vertex_count(); ++x) centers[x] = x;
    }

    // Kernel evaluation time for a sample parameter value.
    auto kernel_time = [&](double t) {
        return req.id == BoundId::ondiag_lower ? 2.0 * t * t : t;
    };

    BoundCheckReport rep;
    rep.id = req.id;
    std::vector<double> times;
    for (double t : req.times) {
        require(std::isfinite(t) && t > 0.0, errc::invalid_parameter,
                "bound sample times must be positive");
        if (req.wrap_length) {
            const double guard = (*req.wrap_length / 6.0) * (*req.wrap_length / 6.0);
            if (kernel_time(t) > guard) {
                rep.clipped = true;
                continue;
            }
        }
        if (req.id == BoundId::gaussian_lower && t <= 1.0) {
            rep.clipped = true;  // (2.2) is stated for t > 1
            continue;
        }
        if (req.id == BoundId::ondiag_lower && t <= 0.5) {
            rep.clipped = true;  // (2.3) is stated for t > 1/2
            continue;
        }
        if (req.id == BoundId::volume_lower && t <= 1.0) {
            rep.clipped = true;  // needs log t > 0
            continue;
        }
        times.push_back(t);
    }
    require(!times.empty(), errc::invalid_parameter,
            "no admissible sample times remain after range guards");

    if (req.id == BoundId::volume_lower) {
        const double floor_c0 = 2.0 * hk.d_mu() * std::exp(1.0);
        require(req.c0 > floor_c0, errc::invalid_parameter,
                "volume lower bound needs C0 > 2 D_mu e = " + format_double(floor_c0) +
                    ", got " + format_double(req.c0));
    }
    if (req.id == BoundId::gaussian_lower)
        require(req.c2 > 0.0 && req.c3 > 0.0, errc::invalid_parameter,
                "gaussian lower bound needs positive C2, C3");
    if (req.id == BoundId::ondiag_lower)
        require(req.c > 0.0, errc::invalid_parameter,
                "on-diagonal lower bound needs positive C");

    rep.t_min = *std::min_element(times.begin(), times.end());
    rep.t_max = *std::max_element(times.begin(), times.end());

    bool first = true;
    auto consider = [&](double ratio, double t, int x, int y, double p, double ref) {
        if (req.collect_samples) rep.samples.push_back({t, x, y, p, ref});
        const bool worse = req.id == BoundId::diagonal_upper ? ratio > rep.worst_ratio
                                                        : ratio < rep.worst_ratio;
        if (first || worse) {
            rep.worst_ratio = ratio;
            rep.worst_t = t;
            rep.worst_x = x;
            rep.worst_y = y;
            first = false;
        }
    };

    for (int x : centers) {
        const auto dist = g.distances_from(x);
        const double total = g.total_measure();
        auto ball_vol = [&](double r) {
            const int hop = static_cast<int>(std::floor(std::max(0.0, r)));
            double vol = 0.0;
            for (int z = 0; z < g.vertex_count(); ++z)
                if (dist[z] <= hop) vol += g.mu(z);
            return std::min(vol, total);
        };

        for (double t : times) {
            switch (req.id) {
                case BoundId::diagonal_upper: {
                    const double v = ball_vol(std::sqrt(t));
                    if (req.diagonal_only) {
                        const double p = hk.value(t, x, x);
                        consider(p * v, t, x, x, p, v);
                    } else {
                        for (int y = 0; y < g.vertex_count(); ++y) {
                            const double p = hk.value(t, x, y);
                            consider(p * v, t, x, y, p, v);
                        }
                    }
                    break;
                }
                case BoundId::gaussian_lower: {
                    const int y_hi = req.diagonal_only ? x + 1 : g.vertex_count();
                    for (int y = req.diagonal_only ? x : 0; y < y_hi; ++y) {
                        const double d = dist[y];
                        const double rhs = req.c2 * std::pow(t, -req.n_exp) *
                                           std::exp(-req.c3 * d * d / (t - 1.0));
                        const double p = hk.value(t, x, y);
                        consider(p / rhs, t, x, y, p, rhs);
                    }
                    break;
                }
                case BoundId::ondiag_lower: {
                    const double p = hk.value(2.0 * t * t, x, x);
                    const double rhs = req.c / ball_vol(t);
                    consider(p / rhs, t, x, x, p, rhs);
                    break;
                }
                case BoundId::volume_lower: {
                    const double p = hk.value(t, x, x);
                    const double rhs = 1.0 / (4.0 * ball_vol(req.c0 * t * std::log(t)));
                    consider(p / rhs, t, x, x, p, rhs);
                    break;
                }
            }
        }
    }

    if (req.id == BoundId::diagonal_upper) {
        rep.fitted_c1 = rep.worst_ratio;
        rep.holds = true;  // a fit, not a verdict
    } else {
        rep.holds = rep.worst_ratio >= 1.0;
    }
    return rep;
}

inline std::vector<BoundCheckReport> verify_bounds(const HeatKernelOperator& hk,
                                                   const std::vector<BoundRequest>& requests) {
    std::vector<BoundCheckReport> out;
    out.reserve(requests.size());
    for (const BoundRequest& req : requests) out.push_back(verify_bound(hk, req));
    return out;
}

}  // namespace gheat
