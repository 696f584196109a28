#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gheat/common.hpp"

namespace gheat {

struct Edge {
    int i = 0;  ///< smaller endpoint
    int j = 0;  ///< larger endpoint
    double weight = 0.0;
};

struct Neighbor {
    int to = 0;
    double weight = 0.0;
};

/// Structural constants of a weighted graph: maximum combinatorial degree,
/// weight and measure ranges, and the uniformity bound
/// D = max_x m(x)/mu(x) with m(x) the sum of incident edge weights.
struct StructuralConstants {
    int max_degree = 0;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double min_mu = 0.0;
    double max_mu = 0.0;
    double d_mu = 0.0;
};

/**
 * Finite connected weighted graph with a positive vertex measure.
 *
 * Vertices are 0..n-1. Edges are undirected with strictly positive
 * weights; a missing pair means "no edge" (zero-weight entries are
 * rejected). The object is immutable after construction, and every
 * constructor-reachable invariant (symmetry, positivity, connectivity,
 * no self-loops, no isolated vertices) is validated eagerly.
 */
class Graph {
public:
    Graph(int vertices, std::vector<double> mu, std::vector<Edge> edges,
          std::vector<std::string> labels = {})
        : mu_(std::move(mu)), edges_(std::move(edges)), labels_(std::move(labels)) {
        require(vertices >= 1, errc::invalid_parameter, "graph needs at least one vertex");
        n_ = vertices;
        require(static_cast<int>(mu_.size()) == n_, errc::dimension_mismatch,
                "measure vector length " + std::to_string(mu_.size()) + " != vertex count " +
                    std::to_string(n_));
        if (!labels_.empty())
            require(static_cast<int>(labels_.size()) == n_, errc::dimension_mismatch,
                    "label vector length does not match vertex count");
        for (int x = 0; x < n_; ++x)
            require(std::isfinite(mu_[x]) && mu_[x] > 0.0, errc::nonpositive_measure,
                    "mu(" + std::to_string(x) + ") must be finite and positive");

        normalize_edges();
        build_adjacency();
        require_connected();

        total_measure_ = 0.0;
        for (double m : mu_) total_measure_ += m;
    }

    int vertex_count() const { return n_; }
    double mu(int x) const { return mu_[check_vertex(x)]; }
    const std::vector<double>& measures() const { return mu_; }
    double total_measure() const { return total_measure_; }

    /// Edges in canonical order: i < j, sorted lexicographically.
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::span<const Neighbor> neighbors(int x) const {
        check_vertex(x);
        return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
    }

    int degree(int x) const { return offsets_[check_vertex(x) + 1] - offsets_[x]; }

    /// m(x): total weight incident to x.
    double weight_sum(int x) const { return weight_sums_[check_vertex(x)]; }

    /// BFS hop distances from x to every vertex.
    std::vector<int> distances_from(int x) const {
        check_vertex(x);
        std::vector<int> dist(n_, -1);
        std::queue<int> frontier;
        dist[x] = 0;
        frontier.push(x);
        while (!frontier.empty()) {
            int v = frontier.front();
            frontier.pop();
            for (const Neighbor& nb : neighbors(v)) {
                if (dist[nb.to] < 0) {
                    dist[nb.to] = dist[v] + 1;
                    frontier.push(nb.to);
                }
            }
        }
        return dist;
    }

    int distance(int x, int y) const {
        check_vertex(y);
        return distances_from(x)[y];
    }

    int diameter() const {
        int d = 0;
        for (int x = 0; x < n_; ++x) {
            const auto dist = distances_from(x);
            d = std::max(d, *std::max_element(dist.begin(), dist.end()));
        }
        return d;
    }

    /// Measure of the closed ball B(x,r); real radii use floor(r).
    double ball_volume(int x, double r) const {
        require(std::isfinite(r) && r >= 0.0, errc::invalid_parameter,
                "ball radius must be finite and nonnegative");
        const int hop = static_cast<int>(std::floor(r));
        const auto dist = distances_from(x);
        double volume = 0.0;
        for (int y = 0; y < n_; ++y)
            if (dist[y] <= hop) volume += mu_[y];
        return volume;
    }

    StructuralConstants structural_constants() const {
        StructuralConstants sc;
        sc.min_weight = std::numeric_limits<double>::infinity();
        sc.max_weight = 0.0;
        sc.min_mu = *std::min_element(mu_.begin(), mu_.end());
        sc.max_mu = *std::max_element(mu_.begin(), mu_.end());
        for (const Edge& e : edges_) {
            sc.min_weight = std::min(sc.min_weight, e.weight);
            sc.max_weight = std::max(sc.max_weight, e.weight);
        }
        for (int x = 0; x < n_; ++x) {
            sc.max_degree = std::max(sc.max_degree, degree(x));
            sc.d_mu = std::max(sc.d_mu, weight_sums_[x] / mu_[x]);
        }
        return sc;
    }

private:
    int check_vertex(int x) const {
        require(x >= 0 && x < n_, errc::unknown_vertex,
                "vertex " + std::to_string(x) + " out of range [0," + std::to_string(n_) + ")");
        return x;
    }

    void normalize_edges() {
        std::map<std::pair<int, int>, double> seen;
        for (Edge& e : edges_) {
            require(e.i >= 0 && e.i < n_ && e.j >= 0 && e.j < n_, errc::unknown_vertex,
                    "edge endpoint out of range");
            require(e.i != e.j, errc::invalid_parameter, "self-loops are not allowed");
            require(std::isfinite(e.weight) && e.weight > 0.0, errc::invalid_parameter,
                    "edge weights must be finite and positive");
            if (e.i > e.j) std::swap(e.i, e.j);
            auto key = std::pair{e.i, e.j};
            auto [it, inserted] = seen.emplace(key, e.weight);
            if (!inserted) {
                if (it->second != e.weight)
                    fail(errc::asymmetric_weights,
                         "conflicting weights for edge (" + std::to_string(e.i) + "," +
                             std::to_string(e.j) + ")");
                fail(errc::invalid_parameter, "duplicate edge (" + std::to_string(e.i) + "," +
                                                  std::to_string(e.j) + ")");
            }
        }
        edges_.clear();
        edges_.reserve(seen.size());
        for (const auto& [key, w] : seen) edges_.push_back({key.first, key.second, w});
    }

    void build_adjacency() {
        offsets_.assign(n_ + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[e.i + 1];
            ++offsets_[e.j + 1];
        }
        for (int x = 0; x < n_; ++x) offsets_[x + 1] += offsets_[x];
        adjacency_.resize(offsets_[n_]);
        std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const Edge& e : edges_) {
            adjacency_[cursor[e.i]++] = {e.j, e.weight};
            adjacency_[cursor[e.j]++] = {e.i, e.weight};
        }
        for (int x = 0; x < n_; ++x)
            std::sort(adjacency_.begin() + offsets_[x], adjacency_.begin() + offsets_[x + 1],
                      [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
        weight_sums_.assign(n_, 0.0);
        for (int x = 0; x < n_; ++x) {
            for (const Neighbor& nb : neighbors(x)) weight_sums_[x] += nb.weight;
            require(weight_sums_[x] > 0.0, errc::invalid_parameter,
                    "vertex " + std::to_string(x) + " is isolated");
        }
    }

    void require_connected() const {
        const auto dist = distances_from(0);
        for (int x = 0; x < n_; ++x)
            require(dist[x] >= 0, errc::disconnected_graph,
                    "vertex " + std::to_string(x) + " unreachable from vertex 0");
    }

    int n_ = 0;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    std::vector<int> offsets_;
    std::vector<Neighbor> adjacency_;
    std::vector<double> weight_sums_;
    double total_measure_ = 0.0;
};

/// How builders assign the vertex measure: mu == 1 everywhere, or
/// mu(x) = m(x) (the normalized Laplacian convention).
enum class MeasureMode { unit, normalized };

/// Cycle graph C_n (n >= 3) with unit edge weights.
inline Graph build_cycle(int n, MeasureMode mode = MeasureMode::normalized) {
    require(n >= 3, errc::invalid_parameter, "cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    edges.reserve(n);
    for (int x = 0; x < n; ++x) edges.push_back({x, (x + 1) % n, 1.0});
    std::vector<double> mu(n, mode == MeasureMode::normalized ? 2.0 : 1.0);
    return Graph(n, std::move(mu), std::move(edges));
}

/// Complete graph K_n with unit weights.
inline Graph build_complete(int n, MeasureMode mode = MeasureMode::normalized) {
    require(n >= 2, errc::invalid_parameter, "complete graph needs at least 2 vertices");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    std::vector<double> mu(n, mode == MeasureMode::normalized ? double(n - 1) : 1.0);
    return Graph(n, std::move(mu), std::move(edges));
}

/// Path graph P_n with unit weights.
inline Graph build_path(int n, MeasureMode mode = MeasureMode::normalized) {
    require(n >= 2, errc::invalid_parameter, "path needs at least 2 vertices");
    std::vector<Edge> edges;
    for (int x = 0; x + 1 < n; ++x) edges.push_back({x, x + 1, 1.0});
    std::vector<double> mu(n, 1.0);
    if (mode == MeasureMode::normalized)
        for (int x = 0; x < n; ++x) mu[x] = (x == 0 || x == n - 1) ? 1.0 : 2.0;
    return Graph(n, std::move(mu), std::move(edges));
}

/// L x L discrete torus (each vertex has 4 neighbors), unit weights.
/// Vertex (r,c) maps to index r*L + c.
inline Graph build_lattice_torus(int side, MeasureMode mode = MeasureMode::normalized) {
    require(side >= 3, errc::invalid_parameter, "torus side must be at least 3");
    const int n = side * side;
    std::vector<Edge> edges;
    edges.reserve(2 * n);
    auto id = [side](int r, int c) {
        return ((r % side + side) % side) * side + ((c % side + side) % side);
    };
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            edges.push_back({id(r, c), id(r, c + 1), 1.0});
            edges.push_back({id(r, c), id(r + 1, c), 1.0});
        }
    std::vector<double> mu(n, mode == MeasureMode::normalized ? 4.0 : 1.0);
    return Graph(n, std::move(mu), std::move(edges));
}

/// Least-squares fit of log V(x,r) against log(r + 1/2) over hop radii
/// [r_min, r_max], averaged over the given centers. The half-step shift
/// centers each discrete annulus, so exact polynomial growth
/// V = c*(2r+1)^d fits with slope d instead of drifting below it.
struct VolumeGrowthFit {
    double exponent = 0.0;   ///< fitted slope (growth dimension)
    double prefactor = 0.0;  ///< exp(intercept)
    double residual = 0.0;   ///< RMS residual of the fit in log space
    int r_min = 0;
    int r_max = 0;  ///< last radius actually used (saturation clips the range)
};

inline VolumeGrowthFit fit_volume_growth(const Graph& g, const std::vector<int>& centers,
                                         int r_max, int r_min = 1) {
    require(!centers.empty(), errc::invalid_parameter, "volume fit needs at least one center");
    require(r_min >= 1 && r_max >= r_min, errc::invalid_parameter,
            "volume fit needs 1 <= r_min <= r_max");
    const double total = g.total_measure();

    // Volumes per radius averaged over centers in log space; a radius is
    // usable only if no sampled ball has swallowed the whole graph.
    std::vector<double> log_mean(r_max + 1, 0.0);
    std::vector<bool> saturated(r_max + 1, false);
    for (int c : centers) {
        const auto dist = g.distances_from(c);
        for (int r = r_min; r <= r_max; ++r) {
            double vol = 0.0;
            for (int y = 0; y < g.vertex_count(); ++y)
                if (dist[y] >= 0 && dist[y] <= r) vol += g.mu(y);
            if (vol >= total) saturated[r] = true;
            log_mean[r] += std::log(vol);
        }
    }
    int r_hi = r_min - 1;
    for (int r = r_min; r <= r_max && !saturated[r]; ++r) r_hi = r;
    require(r_hi >= r_min + 1, errc::degenerate_fit,
            "fewer than two unsaturated radii in [" + std::to_string(r_min) + "," +
                std::to_string(r_max) + "]; shrink the radius range or enlarge the graph");

    const int count = r_hi - r_min + 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int r = r_min; r <= r_hi; ++r) {
        const double x = std::log(r + 0.5);
        const double y = log_mean[r] / static_cast<double>(centers.size());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    require(denom > 0.0, errc::degenerate_fit, "volume fit abscissae are collinear");
    VolumeGrowthFit fit;
    fit.exponent = (count * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / count;
    fit.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (int r = r_min; r <= r_hi; ++r) {
        const double x = std::log(r + 0.5);
        const double y = log_mean[r] / static_cast<double>(centers.size());
        const double e = y - (intercept + fit.exponent * x);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / count);
    fit.r_min = r_min;
    fit.r_max = r_hi;
    return fit;
}

}  // namespace gheat
