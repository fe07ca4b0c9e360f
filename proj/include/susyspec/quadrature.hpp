#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace susyspec {

// Composite 16-node Gauss-Legendre rule with panels aligned to the given
// cut points.  Integrands here are piecewise analytic, so panel-aligned
// Gauss nodes converge at machine precision.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {
inline const double* gl16_x() {
    static const double x[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    return x;
}
inline const double* gl16_w() {
    static const double w[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    return w;
}
} // namespace detail

// Panels over [a, b] (a < b) split at `cuts` and refined so no panel is
// longer than max_len.
inline QuadratureRule composite_gauss(double a, double b, std::vector<double> cuts,
                                      double max_len) {
    QuadratureRule rule;
    if (!(b > a))
        return rule;
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> edges;
    for (double c : cuts) {
        if (c < a - 1e-14 || c > b + 1e-14)
            continue;
        if (edges.empty() || c - edges.back() > 1e-13)
            edges.push_back(c);
    }
    if (edges.size() < 2)
        edges = {a, b};

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i];
        const double hi = edges[i + 1];
        const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_len)));
        const double h = (hi - lo) / parts;
        for (int k = 0; k < parts; ++k) {
            const double mid = lo + (k + 0.5) * h;
            const double half = 0.5 * h;
            for (int q = 0; q < 8; ++q) {
                const double dx = half * detail::gl16_x()[q];
                const double w = half * detail::gl16_w()[q];
                rule.nodes.push_back(mid - dx);
                rule.weights.push_back(w);
                rule.nodes.push_back(mid + dx);
                rule.weights.push_back(w);
            }
        }
    }
    // ascending nodes make downstream single-sweep propagation possible
    std::vector<std::size_t> idx(rule.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t l, std::size_t r) { return rule.nodes[l] < rule.nodes[r]; });
    QuadratureRule sorted;
    sorted.nodes.reserve(idx.size());
    sorted.weights.reserve(idx.size());
    for (std::size_t i : idx) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

} // namespace susyspec
