#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssprof/grid.hpp"
#include "ssprof/kernels.hpp"
#include "ssprof/profile.hpp"
#include "ssprof/types.hpp"

namespace ssprof {

// Hypothesis diagnostics of the existence theorems. composite is the sum of
// the regime's summands; pass compares it against the threshold.
struct SmallnessReport {
    Regime regime = Regime::expander_alpha_lt_1;
    // alpha < 1 summands
    double a = 0, p_delta = 0, delta = 0, pd_delta2 = 0, pd_theta0_over_a = 0,
           a_delta_over_theta0 = 0, a2_over_theta0 = 0, p_delta_a = 0;
    // alpha = 1 summand
    double a_log_inv_delta = 0;
    double composite = 0;
    double threshold = 0.1;
    bool pass = false;
    bool division_by_zero = false;
};

SmallnessReport check_smallness(const PhysicalParams& pp, const BoundaryData& bd,
                                double threshold = 0.1);

// One Picard iterate: (U, Theta) with derivatives on the inner grid.
struct IterationState {
    int iterate_index = 0;
    std::vector<double> u, u_prime, theta, theta_prime;
    double norm_distance = 0.0;         // E^delta distance to the previous iterate
    double contraction_estimate = 0.0;  // ratio of successive distances (0 when undefined)
};

// Weighted sup norm of the fixed-point space, taken over grid nodes in
// (0, delta]. The pair is passed through its samples and derivative samples.
double norm_Edelta(std::span<const double> u, std::span<const double> u_prime,
                   std::span<const double> theta, std::span<const double> theta_prime,
                   const RadialGrid& inner, const BoundaryData& bd, const PhysicalParams& pp);

double distance_Edelta(const IterationState& x, const IterationState& y, const RadialGrid& inner,
                       const BoundaryData& bd, const PhysicalParams& pp);

// E^delta distance of a state to the ball center (A r, Theta0).
double distance_to_center(const IterationState& x, const RadialGrid& inner,
                          const BoundaryData& bd, const PhysicalParams& pp);

// Forcing term of the velocity map, alpha < 1 regime. Fills kernels.f_u and
// requires kernels.v_tilde; P and P' come from the exponential formula.
std::vector<double> compute_F_U(const IterationState& state, std::span<const double> p,
                                std::span<const double> p_prime, const KernelSet& kernels,
                                const RadialGrid& inner, const PhysicalParams& pp,
                                const BoundaryData& bd);

// Forcing term of the velocity map, alpha = 1 regime.
std::vector<double> compute_F_U_alpha1(const IterationState& state, std::span<const double> p,
                                       std::span<const double> p_prime, const RadialGrid& inner,
                                       const PhysicalParams& pp);

// Forcing term of the temperature map, both regimes.
std::vector<double> compute_F_Theta(const IterationState& state, std::span<const double> p,
                                    std::span<const double> p_prime, const RadialGrid& inner,
                                    const PhysicalParams& pp);

struct PhiResult {
    IterationState state;
    std::vector<double> p;  // density of the input iterate (exponential formula)
    KernelSet kernels;
};

// One application of the integro-differential map.
PhiResult apply_Phi(const IterationState& state, const PhysicalParams& pp,
                    const BoundaryData& bd, const RadialGrid& inner);

enum class PicardStatus {
    converged,
    no_convergence,
    ball_exit,
    contraction_failure,
    smallness_failed
};

struct PicardOptions {
    double tol = 1e-11;
    int max_iter = 40;
    double smallness_threshold = 0.1;
    bool require_smallness = true;
    double contraction_fail_threshold = 0.95;  // two consecutive ratios above this fail
    double alpha1_slope_tol = 0.05;  // admissible drift of u(r)/r at the origin, alpha = 1
};

struct PicardResult {
    PicardStatus status = PicardStatus::no_convergence;
    ProfileTriple inner;  // converged (or last) iterate with P and derivatives
    KernelSet kernels;
    std::vector<IterationState> history;
    SmallnessReport smallness;
    std::string message;

    bool converged() const { return status == PicardStatus::converged; }
};

// Picard iteration from the seed (A r, Theta0) until the E^delta distance of
// successive iterates drops below tol.
PicardResult picard_solve(const PhysicalParams& pp, const BoundaryData& bd,
                          const RadialGrid& grid, const PicardOptions& opt = {});

IterationState seed_state(const BoundaryData& bd, const RadialGrid& inner);

}  // namespace ssprof
