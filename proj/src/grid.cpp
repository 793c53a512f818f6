#include "ssprof/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssprof {

RadialGrid RadialGrid::inner_subgrid() const {
    RadialGrid g;
    g.nodes.assign(nodes.begin(), nodes.begin() + static_cast<long>(inner_count));
    g.inner_count = inner_count;
    g.grading = grading;
    g.delta = delta;
    g.r_max = delta;
    return g;
}

RadialGrid build_grid(double delta, double r_max, std::size_t inner_count,
                      std::size_t outer_count, double grading) {
    if (!(delta > 0.0) || r_max < delta)
        throw std::invalid_argument("build_grid: need 0 < delta <= r_max");
    if (outer_count == 0 && r_max != delta)
        throw std::invalid_argument("build_grid: outer_count 0 requires r_max == delta");
    if (outer_count > 0 && !(r_max > delta))
        throw std::invalid_argument("build_grid: r_max must exceed delta");
    if (inner_count < 16 || (outer_count > 0 && outer_count < 16))
        throw std::invalid_argument("build_grid: counts must be >= 16");
    if (!(grading >= 1.0 && grading <= 2.0))
        throw std::invalid_argument("build_grid: grading must lie in [1, 2]");

    RadialGrid g;
    g.inner_count = inner_count;
    g.grading = grading;
    g.delta = delta;
    g.r_max = r_max;
    g.nodes.reserve(inner_count + outer_count);

    const auto n = static_cast<double>(inner_count);
    double h = grading > 1.0 ? delta * (grading - 1.0) / (std::pow(grading, n) - 1.0)
                             : delta / n;
    double r = 0.0;
    for (std::size_t k = 0; k < inner_count; ++k) {
        r += h;
        g.nodes.push_back(r);
        h *= grading;
    }
    g.nodes[inner_count - 1] = delta;  // pin against rounding drift

    if (outer_count > 0) {
        const double ratio = std::log(r_max / delta);
        for (std::size_t k = 1; k <= outer_count; ++k) {
            g.nodes.push_back(delta * std::exp(ratio * static_cast<double>(k) /
                                               static_cast<double>(outer_count)));
        }
        g.nodes.back() = r_max;
    }

    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        if (!(g.nodes[i] > g.nodes[i - 1]))
            throw std::invalid_argument("build_grid: nodes not strictly increasing (counts too large?)");
    return g;
}

double grading_for_rmin(std::size_t inner_count, double rmin_over_delta) {
    if (!(rmin_over_delta > 0.0 && rmin_over_delta < 1.0))
        throw std::invalid_argument("grading_for_rmin: ratio must lie in (0,1)");
    const auto n = static_cast<double>(inner_count);
    if (1.0 / n <= rmin_over_delta) return 1.0;
    // solve (g-1)/(g^n - 1) = rmin_over_delta by bisection in (1, 2]
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double first = (mid - 1.0) / (std::pow(mid, n) - 1.0);
        (first > rmin_over_delta ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ssprof
