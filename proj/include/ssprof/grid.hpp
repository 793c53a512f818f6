#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ssprof {

// Radial grid on (0, r_max]. The inner region (0, delta] is graded toward
// the vacuum origin with geometrically growing spacings; the outer region
// (delta, r_max] is log-uniform. delta and r_max are grid nodes.
struct RadialGrid {
    std::vector<double> nodes;
    std::size_t inner_count = 0;  // nodes in (0, delta]
    double grading = 1.0;         // ratio of successive inner spacings
    double delta = 0.0;
    double r_max = 0.0;

    std::size_t size() const { return nodes.size(); }
    double r_min() const { return nodes.front(); }
    std::size_t delta_index() const { return inner_count - 1; }

    RadialGrid inner_subgrid() const;
    std::span<const double> inner_nodes() const {
        return std::span<const double>(nodes.data(), inner_count);
    }
};

// Builds the composite grid. Spacing of the k-th inner interval is
// h1 * grading^k with h1 chosen so the inner nodes end exactly at delta.
// outer_count == 0 requires r_max == delta.
RadialGrid build_grid(double delta, double r_max, std::size_t inner_count,
                      std::size_t outer_count, double grading);

// Grading ratio that places the first inner node at rmin_over_delta * delta
// for the given node count (1 when the count alone suffices).
double grading_for_rmin(std::size_t inner_count, double rmin_over_delta);

}  // namespace ssprof
