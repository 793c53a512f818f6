#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ssprof/grid.hpp"
#include "ssprof/profile.hpp"
#include "ssprof/types.hpp"

namespace ssprof {

// Cavitation hypotheses on the density: positivity away from the origin and
// the two bounded integral ratios near it.
struct CavitationCheck {
    double eps = 0.0;
    double p_eps = 0.0;       // inf of P on [eps, infinity)
    double lambda_cap = 0.0;  // sup over (0, eps) of the larger ratio
    double ratio1_sup = 0.0;  // r int P^{1-a} / int P^{1-a} r1
    double ratio2_sup = 0.0;  // int P / (P^a int P^{1-a})
    bool divergent = false;
};

CavitationCheck check_cavitation(const ProfileTriple& profile, const PhysicalParams& pp,
                                 double eps);

// Integrating-factor matrix of the weighted energy estimate, per node. The
// entries are named a11/a12/a21/a22 so they cannot collide with the viscosity
// exponent and the matching radius. Eigenvalues of A are -lambda_min and
// -lambda_max.
struct MatrixA {
    std::vector<double> a11, a12, a21, a22;
    std::vector<double> discriminant;
    std::vector<double> lambda_min, lambda_max;
    std::vector<double> q12, q21;
    std::vector<double> q12q21;   // product, formed without cancellation
    std::vector<double> d_factor; // D = 1 - q12 q21
    std::size_t size() const { return a11.size(); }
};

MatrixA build_matrix_A(const ProfileTriple& profile, const PhysicalParams& pp);

// Coefficients of the four-term expansion of
// <Q^{-1} diag(e^{-lmin}, e^{-lmax}) Q (a,b), (c,d)> at one node.
struct QuadFormTerms {
    double coef_ac = 0.0, coef_bd = 0.0, coef_bc = 0.0, coef_ad = 0.0;
    double value = 0.0;
};

QuadFormTerms quadratic_form_terms(const MatrixA& m, std::size_t node, double a, double b,
                                   double c, double d);

struct QBoundReport {
    double b_sup = 0.0;         // sup |U/r|
    double sup_pa_theta = 0.0;  // sup P^alpha Theta
    bool q12_global = false, q21_global = false, q12_small = false;
    bool exp_sqrt_delta_small = false, exp_lambda_min_small = false, d_factor_ok = false;
    bool all_pass = false;
    std::vector<std::string> failures;  // named, with the radius of first failure
};

// Nodewise verification of the lemma bounds on q12, q21, D and the small-r
// exponential caps.
QBoundReport verify_q_bounds(const MatrixA& m, const CavitationCheck& cav,
                             const ProfileTriple& profile, const PhysicalParams& pp);

// Both sides of the weighted energy inequality, with every sub-integral of
// the proof stored separately. All integrals are over r^{d-1} dr with the
// angular constant dropped from both sides.
struct EnergyLedger {
    double lhs1 = 0.0, lhs2 = 0.0, lhs_exact = 0.0, lhs_lower = 0.0;
    double rhs1 = 0.0, rhs2 = 0.0, rhs3 = 0.0, rhs_exact = 0.0, rhs_upper = 0.0;
    double r11 = 0.0, r12s = 0.0, r12l = 0.0;
    double r21 = 0.0, r22_diag = 0.0, r22_cross = 0.0, r23s = 0.0, r23l = 0.0;
    double n1_part = 0.0, n2_part = 0.0;
    double hardy_constant = 0.0;      // (2/(d-2))^2
    double cutoff_split_error = 0.0;  // |(r12s + r12l) - unsplit r12|
    double tail_estimate = 0.0;       // truncation beyond r_max
    // weighted integrals entering the final bound
    double int_emin_thp2 = 0.0, int_emax_up2 = 0.0, int_emax_pu2 = 0.0, int_emin_pth2 = 0.0;
};

// LHS of the estimate: exact quadratic-form integral split at eps plus the
// lemma's lower bound.
EnergyLedger evaluate_LHS(const ProfileTriple& profile, const MatrixA& m,
                          const PhysicalParams& pp, double eps);

// RHS decomposition RHS1 + RHS2 + RHS3 with the cutoff split and the lemma's
// final upper bound. Extends the ledger produced by evaluate_LHS.
void evaluate_RHS(const ProfileTriple& profile, const MatrixA& m, const PhysicalParams& pp,
                  double eps, EnergyLedger& ledger);

// C^1 cubic cutoff: 1 on [0, eps], 0 on [2 eps, inf), |chi'| <= 2/eps.
double smooth_cutoff(double r, double eps);
double smooth_cutoff_deriv(double r, double eps);

struct HardyCheck {
    double lhs = 0.0, rhs = 0.0, constant = 0.0;
    bool pass = false;
};

// Direct two-sided quadrature of the Hardy inequality for f = chi * theta.
HardyCheck hardy_inequality_check(const ProfileTriple& profile, int d, double eps);

struct HypothesisCheck {
    std::string name;
    double value = 0.0, threshold = 0.0;
    bool pass = false;
};

struct AuditReport {
    std::vector<HypothesisCheck> hypotheses;
    bool hypotheses_pass = false;
    CavitationCheck cavitation;
    QBoundReport qbounds;
    EnergyLedger ledger;
    double margin = 0.0;  // lhs_lower - rhs_upper
    std::string verdict;  // trivial | no-shrinker | hypotheses-fail | inconclusive
};

// Full non-existence audit of a shrinker candidate.
AuditReport audit_shrinker(const ProfileTriple& profile, const PhysicalParams& pp, double eps,
                           double smallness_threshold = 1e-3);

// Bundled analytic candidate family used by tests and the CLI.
struct ShrinkerCandidateSpec {
    std::string name;
    double theta_amp = 0.0;
    double u_amp = 0.0;    // U = u_amp * r * Theta
    double p_amp = 0.0;
    double p_exponent = 2.0;  // cavitation power of P near the origin
    bool expect_hypotheses_pass = true;
    std::string expected_violation;  // named supremum for negative controls
};

std::vector<ShrinkerCandidateSpec> bundled_candidate_specs();
ProfileTriple make_shrinker_candidate(const ShrinkerCandidateSpec& spec, const RadialGrid& grid);

}  // namespace ssprof
