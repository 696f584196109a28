#pragma once

#include "gheat/graph.hpp"

namespace gheat {

namespace detail {
inline void check_field(const Graph& g, const Field& f, const char* what) {
    require(f.size() == g.vertex_count(), errc::dimension_mismatch,
            std::string(what) + ": field length " + std::to_string(f.size()) +
                " != vertex count " + std::to_string(g.vertex_count()));
}
}  // namespace detail

/// Weighted graph Laplacian: (Lf)(x) = (1/mu(x)) * sum_{y~x} w_xy (f(y) - f(x)).
inline Field laplacian(const Graph& g, const Field& f) {
    detail::check_field(g, f, "laplacian");
    const int n = g.vertex_count();
    Field out(n);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * (f[nb.to] - f[x]);
        out[x] = acc / g.mu(x);
    }
    return out;
}

/// Carre du champ: Gamma(f,g)(x) = (1/(2 mu(x))) * sum_{y~x} w_xy (f(y)-f(x))(g(y)-g(x)).
inline Field gamma(const Graph& g, const Field& f, const Field& h) {
    detail::check_field(g, f, "gamma");
    detail::check_field(g, h, "gamma");
    const int n = g.vertex_count();
    Field out(n);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(x))
            acc += nb.weight * (f[nb.to] - f[x]) * (h[nb.to] - h[x]);
        out[x] = acc / (2.0 * g.mu(x));
    }
    return out;
}

inline Field gamma(const Graph& g, const Field& f) { return gamma(g, f, f); }

/// Iterated form: Gamma2(f) = (1/2) [ L Gamma(f) - 2 Gamma(f, Lf) ].
inline Field gamma2(const Graph& g, const Field& f) {
    const Field gf = gamma(g, f);
    const Field lf = laplacian(g, f);
    return 0.5 * (laplacian(g, gf) - 2.0 * gamma(g, f, lf));
}

/// Integral against the vertex measure: sum_x mu(x) f(x).
inline double integrate(const Graph& g, const Field& f) {
    detail::check_field(g, f, "integrate");
    double acc = 0.0;
    for (int x = 0; x < g.vertex_count(); ++x) acc += g.mu(x) * f[x];
    return acc;
}

}  // namespace gheat
